"""Paired-policy sweep over streams and target loss rates.

For each (stream, target) the schedule is calibrated once with the
tail-drop baseline, then both policies run on exactly the same packets
and schedule, which makes every cell a paired comparison.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .bitstream import NalUnit
from .packetizer import packetize, packets_per_irap_nal_mean
from .policy import CONTENT_AWARE, TAIL_DROP
from .report import SweepCell
from .schedule import DEFAULT_CALIBRATION_PERIOD, calibrate
from .simulator import SimulationConfig, replay_check, run

DEFAULT_TARGETS = tuple(float(t) for t in range(5, 55, 5))


@dataclass(frozen=True)
class StreamSource:
    stream_id: str
    units: tuple[NalUnit, ...]
    tags: dict[str, str] = field(default_factory=dict)

    @property
    def codec(self) -> str:
        return self.units[0].codec.value if self.units else "?"


def _sweep_cell(args) -> SweepCell:
    source, target, config, period, check_replay = args
    packets = packetize(list(source.units), config.payload_size, config.repeat)
    schedule, _achieved = calibrate(target, config, packets, period=period)
    cells = {}
    for policy in (TAIL_DROP, CONTENT_AWARE):
        cfg = replace(config, policy=policy, schedule=schedule)
        report, events = run(cfg, packets)
        if check_replay and not replay_check(events, cfg):
            raise AssertionError(
                f"replay check failed for {source.stream_id} target {target} {policy}"
            )
        cells[policy] = report
    return SweepCell(
        stream_id=source.stream_id,
        codec=source.codec,
        payload_size=config.payload_size,
        packets_per_irap_nal_mean=packets_per_irap_nal_mean(
            list(source.units), config.payload_size
        ),
        target_loss_pct=target,
        seed=config.seed,
        baseline=cells[TAIL_DROP],
        policy=cells[CONTENT_AWARE],
        tags=dict(source.tags),
    )


def run_sweep(
    sources: list[StreamSource],
    targets: tuple[float, ...] = DEFAULT_TARGETS,
    config: SimulationConfig = SimulationConfig(),
    period: int = DEFAULT_CALIBRATION_PERIOD,
    jobs: int = 1,
    check_replay: bool = False,
) -> list[SweepCell]:
    work = [
        (source, target, config, period, check_replay)
        for source in sources
        for target in targets
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, work))
    return [_sweep_cell(w) for w in work]
