"""Content-aware packet dropping for video streams under congestion.

Library + CLI: Annex-B NAL parsing and statistics, synthetic stream
generation, packetization, a preemptive non-IRAP drop policy next to a
tail-drop baseline, a deterministic congestion simulator, loss-calibrated
schedules, and paired sweep reports with figures.
"""

__version__ = "0.1.0"

from .bitstream import (
    Codec,
    NalClass,
    NalHeader,
    NalUnit,
    StreamStats,
    classify_nal,
    parse_nal_header,
    scan_annexb,
    stream_stats,
)
from .packetizer import DEFAULT_PAYLOAD_SIZE, PacketDescriptor, packetize
from .policy import (
    CONTENT_AWARE,
    TAIL_DROP,
    BufferState,
    CongestionNotice,
    ContentAwarePolicy,
    DropDecision,
    TailDropPolicy,
    make_policy,
)
from .report import SweepCell, aggregate, write_outputs
from .schedule import (
    CongestionSchedule,
    calibrate,
    empty_schedule,
    periodic_schedule,
    random_schedule,
)
from .simulator import (
    RunReport,
    SimEvent,
    SimulationConfig,
    replay_check,
    run,
)
from .streamgen import SynthSpec, generate_stream
from .sweep import StreamSource, run_sweep

__all__ = [
    "Codec",
    "NalClass",
    "NalHeader",
    "NalUnit",
    "StreamStats",
    "classify_nal",
    "parse_nal_header",
    "scan_annexb",
    "stream_stats",
    "DEFAULT_PAYLOAD_SIZE",
    "PacketDescriptor",
    "packetize",
    "CONTENT_AWARE",
    "TAIL_DROP",
    "BufferState",
    "CongestionNotice",
    "ContentAwarePolicy",
    "DropDecision",
    "TailDropPolicy",
    "make_policy",
    "SweepCell",
    "aggregate",
    "write_outputs",
    "CongestionSchedule",
    "calibrate",
    "empty_schedule",
    "periodic_schedule",
    "random_schedule",
    "RunReport",
    "SimEvent",
    "SimulationConfig",
    "replay_check",
    "run",
    "SynthSpec",
    "generate_stream",
    "StreamSource",
    "run_sweep",
]
