"""Drop-recommendation policies.

The content-aware policy preemptively recommends dropping non-IRAP packets
while a congestion timer runs and the buffer cannot hold the packets still
expected before the congestion ends. The tail-drop baseline never
recommends anything; overflow handling is the simulator's and is identical
for both policies. Either way the output is only a recommendation; the
forwarding device (simulator) makes the actual drop.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .bitstream import NalClass
from .errors import InvalidParams
from .packetizer import PacketDescriptor

CONTENT_AWARE = "content-aware"
TAIL_DROP = "tail-drop"
POLICY_NAMES = (CONTENT_AWARE, TAIL_DROP)


@dataclass(frozen=True)
class CongestionNotice:
    start_tick: int
    duration_ticks: int

    def __post_init__(self) -> None:
        if self.duration_ticks < 1:
            raise InvalidParams("congestion duration must be >= 1 tick")


@dataclass
class BufferState:
    capacity: int
    occupied: int

    @property
    def free(self) -> int:
        return self.capacity - self.occupied


class DropReason(enum.Enum):
    NONE = "none"
    PREEMPTIVE_NON_IRAP = "preemptive_non_irap"


@dataclass(frozen=True)
class DropDecision:
    recommend_drop: bool
    reason: DropReason


NO_DROP = DropDecision(False, DropReason.NONE)
DROP_NON_IRAP = DropDecision(True, DropReason.PREEMPTIVE_NON_IRAP)


class DropPolicy:
    """Interface shared by all policies.

    State is the congestion timer (ticks of congestion left) plus the
    configured ingress rate; one policy instance belongs to one run.
    """

    name: str

    def __init__(self, input_rate: int) -> None:
        self.input_rate = input_rate
        self.timer_remaining = 0

    def on_congestion_start(self, notice: CongestionNotice) -> None:
        # latest notice wins, including renewed/overlapping congestion
        self.timer_remaining = notice.duration_ticks

    def on_tick(self) -> None:
        if self.timer_remaining > 0:
            self.timer_remaining -= 1

    def recommend(self, packet: PacketDescriptor, buffer: BufferState) -> DropDecision:
        raise NotImplementedError


class ContentAwarePolicy(DropPolicy):
    name = CONTENT_AWARE

    def __init__(self, input_rate: int, protect_non_vcl: bool = True) -> None:
        super().__init__(input_rate)
        self.protect_non_vcl = protect_non_vcl

    def recommend(self, packet: PacketDescriptor, buffer: BufferState) -> DropDecision:
        if self.timer_remaining <= 0:
            return NO_DROP
        expected_remaining = self.input_rate * self.timer_remaining
        if buffer.free >= expected_remaining:
            return NO_DROP
        cls = packet.nal_class
        if cls is NalClass.IRAP_VCL:
            return NO_DROP
        if self.protect_non_vcl and cls is NalClass.NON_VCL:
            return NO_DROP
        return DROP_NON_IRAP


class TailDropPolicy(DropPolicy):
    name = TAIL_DROP

    def recommend(self, packet: PacketDescriptor, buffer: BufferState) -> DropDecision:
        return NO_DROP


def make_policy(
    name: str, input_rate: int, protect_non_vcl: bool = True
) -> DropPolicy:
    if name == CONTENT_AWARE:
        return ContentAwarePolicy(input_rate, protect_non_vcl)
    if name == TAIL_DROP:
        return TailDropPolicy(input_rate)
    raise InvalidParams(f"unknown policy {name!r}; expected one of {POLICY_NAMES}")
