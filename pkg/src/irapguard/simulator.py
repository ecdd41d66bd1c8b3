"""Discrete-tick model of a packet-forwarding device under congestion.

One FIFO buffer, scripted congestion windows during which the output rate
drops to zero, a policy hook consulted on every arrival, and a complete
event log. Within a tick, the queued backlog drains before arrivals are
admitted (egress frees space before ingress), leftover egress capacity
then serves same-tick arrivals, and finally the policy timer advances.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .bitstream import NalClass
from .errors import EmptyStream, InvalidConfig
from .packetizer import DEFAULT_PAYLOAD_SIZE, PacketDescriptor
from .policy import CONTENT_AWARE, BufferState, CongestionNotice, make_policy
from .schedule import CongestionSchedule, empty_schedule

ARRIVE = "ARRIVE"
ENQUEUE = "ENQUEUE"
DROP_PREEMPTIVE = "DROP_PREEMPTIVE"
DROP_OVERFLOW = "DROP_OVERFLOW"
DEPART = "DEPART"


class SimEvent(NamedTuple):
    tick: int
    kind: str
    packet_id: int


@dataclass(frozen=True)
class SimulationConfig:
    input_rate: int = 60
    output_rate: int = 120
    buffer_capacity: int = 60
    policy: str = CONTENT_AWARE
    payload_size: int = DEFAULT_PAYLOAD_SIZE
    repeat: int = 1
    schedule: CongestionSchedule = field(default_factory=lambda: empty_schedule(0))
    seed: int = 0
    protect_non_vcl: bool = True

    def validate(self) -> None:
        if self.input_rate < 1:
            raise InvalidConfig("input_rate must be >= 1")
        if self.output_rate < 0:
            raise InvalidConfig("output_rate must be >= 0")
        if self.buffer_capacity < 1:
            raise InvalidConfig("buffer_capacity must be >= 1")
        if self.payload_size < 1:
            raise InvalidConfig("payload_size must be >= 1")
        if self.repeat < 1:
            raise InvalidConfig("repeat must be >= 1")


@dataclass
class RunReport:
    arrived: int
    departed: int
    dropped_preemptive: int
    dropped_overflow: int
    residual_in_buffer: int
    arrived_by_class: dict[NalClass, int]
    dropped_by_class: dict[NalClass, int]
    irap_packet_loss_pct: float
    overall_packet_loss_pct: float
    nals_arrived: int
    nals_lost: int
    irap_nals_arrived: int
    irap_nals_lost: int
    irap_nal_loss_pct: float
    config: dict

    def to_json_dict(self) -> dict:
        return {
            "totals": {
                "arrived": self.arrived,
                "departed": self.departed,
                "dropped_preemptive": self.dropped_preemptive,
                "dropped_overflow": self.dropped_overflow,
                "residual_in_buffer": self.residual_in_buffer,
            },
            "packets_by_class": {
                c.value: {
                    "arrived": self.arrived_by_class[c],
                    "dropped": self.dropped_by_class[c],
                }
                for c in NalClass
            },
            "irap_packet_loss_pct": self.irap_packet_loss_pct,
            "overall_packet_loss_pct": self.overall_packet_loss_pct,
            "nals": {
                "arrived": self.nals_arrived,
                "lost": self.nals_lost,
                "irap_arrived": self.irap_nals_arrived,
                "irap_lost": self.irap_nals_lost,
            },
            "irap_nal_loss_pct": self.irap_nal_loss_pct,
            "config": self.config,
        }


def run(
    config: SimulationConfig, packets: list[PacketDescriptor]
) -> tuple[RunReport, list[SimEvent]]:
    """Simulate the whole packet stream; fully deterministic.

    The loop ends once the source is exhausted and the buffer has drained
    (or can never drain, with output_rate 0, leaving a residual).
    """
    config.validate()
    if not packets:
        raise EmptyStream("packet list is empty")

    policy = make_policy(config.policy, config.input_rate, config.protect_non_vcl)
    windows = config.schedule.windows
    starts = {s: d for s, d in windows}
    n = len(packets)
    n_nals = packets[-1].nal_index + 1

    buffer: deque[PacketDescriptor] = deque()
    buf_state = BufferState(capacity=config.buffer_capacity, occupied=0)
    events: list[SimEvent] = []
    append = events.append

    arrived = departed = dropped_pre = dropped_ovf = 0
    arrived_by_class = {c: 0 for c in NalClass}
    dropped_by_class = {c: 0 for c in NalClass}
    nal_seen = bytearray(n_nals)
    nal_lost = bytearray(n_nals)
    nal_irap = bytearray(n_nals)

    pos = 0
    t = 0
    widx = 0
    in_rate = config.input_rate
    out_rate = config.output_rate
    capacity = config.buffer_capacity

    while pos < n or buffer:
        duration = starts.get(t)
        if duration is not None:
            policy.on_congestion_start(CongestionNotice(t, duration))
        while widx < len(windows) and windows[widx][0] + windows[widx][1] <= t:
            widx += 1
        congested = (
            widx < len(windows)
            and windows[widx][0] <= t < windows[widx][0] + windows[widx][1]
        )

        # output_rate is the tick's egress capacity; queued packets drain
        # before arrivals are admitted, and leftover capacity then serves
        # same-tick arrivals (line-rate forwarding keeps the buffer clear
        # outside congestion)
        egress_budget = 0 if congested else out_rate
        while egress_budget > 0 and buffer:
            pkt = buffer.popleft()
            departed += 1
            egress_budget -= 1
            append(SimEvent(t, DEPART, pkt.packet_id))
        buf_state.occupied = len(buffer)

        for _ in range(in_rate):
            if pos >= n:
                break
            pkt = packets[pos]
            pos += 1
            arrived += 1
            cls = pkt.nal_class
            arrived_by_class[cls] += 1
            ni = pkt.nal_index
            if not nal_seen[ni]:
                nal_seen[ni] = 1
                if cls is NalClass.IRAP_VCL:
                    nal_irap[ni] = 1
            append(SimEvent(t, ARRIVE, pkt.packet_id))
            decision = policy.recommend(pkt, buf_state)
            if decision.recommend_drop:
                dropped_pre += 1
                dropped_by_class[cls] += 1
                nal_lost[ni] = 1
                append(SimEvent(t, DROP_PREEMPTIVE, pkt.packet_id))
            elif buf_state.occupied >= capacity:
                dropped_ovf += 1
                dropped_by_class[cls] += 1
                nal_lost[ni] = 1
                append(SimEvent(t, DROP_OVERFLOW, pkt.packet_id))
            else:
                buffer.append(pkt)
                buf_state.occupied += 1
                append(SimEvent(t, ENQUEUE, pkt.packet_id))

        while egress_budget > 0 and buffer:
            pkt = buffer.popleft()
            departed += 1
            egress_budget -= 1
            append(SimEvent(t, DEPART, pkt.packet_id))
        buf_state.occupied = len(buffer)

        policy.on_tick()
        t += 1
        if pos >= n and buffer and out_rate == 0:
            break  # nothing can ever depart; count the rest as residual

    residual = len(buffer)
    irap_arrived = arrived_by_class[NalClass.IRAP_VCL]
    irap_dropped = dropped_by_class[NalClass.IRAP_VCL]
    dropped = dropped_pre + dropped_ovf
    nals_arrived = sum(nal_seen)
    nals_lost = sum(nal_lost)
    irap_nals_arrived = sum(nal_irap)
    irap_nals_lost = sum(1 for i in range(n_nals) if nal_irap[i] and nal_lost[i])

    report = RunReport(
        arrived=arrived,
        departed=departed,
        dropped_preemptive=dropped_pre,
        dropped_overflow=dropped_ovf,
        residual_in_buffer=residual,
        arrived_by_class=arrived_by_class,
        dropped_by_class=dropped_by_class,
        irap_packet_loss_pct=100.0 * irap_dropped / irap_arrived if irap_arrived else 0.0,
        overall_packet_loss_pct=100.0 * dropped / arrived if arrived else 0.0,
        nals_arrived=nals_arrived,
        nals_lost=nals_lost,
        irap_nals_arrived=irap_nals_arrived,
        irap_nals_lost=irap_nals_lost,
        irap_nal_loss_pct=(
            100.0 * irap_nals_lost / irap_nals_arrived if irap_nals_arrived else 0.0
        ),
        config={
            "input_rate": config.input_rate,
            "output_rate": config.output_rate,
            "buffer_capacity": config.buffer_capacity,
            "policy": config.policy,
            "payload_size": config.payload_size,
            "repeat": config.repeat,
            "seed": config.seed,
            "protect_non_vcl": config.protect_non_vcl,
            "congestion_fraction": config.schedule.congestion_fraction,
        },
    )
    return report, events


def find_replay_violation(
    events: list[SimEvent], config: SimulationConfig
) -> str | None:
    """Re-validate an event log; returns the first violation, or None."""
    last_tick = -1
    state: dict[int, str] = {}
    fifo: deque[int] = deque()
    occupied = 0
    for ev in events:
        if ev.tick < last_tick:
            return f"tick goes backwards at {ev}"
        last_tick = ev.tick
        prev = state.get(ev.packet_id)
        if ev.kind == ARRIVE:
            if prev is not None:
                return f"duplicate ARRIVE for packet {ev.packet_id}"
            state[ev.packet_id] = ARRIVE
        elif ev.kind in (DROP_PREEMPTIVE, DROP_OVERFLOW):
            if prev != ARRIVE:
                return f"{ev.kind} without pending ARRIVE for packet {ev.packet_id}"
            state[ev.packet_id] = ev.kind
        elif ev.kind == ENQUEUE:
            if prev != ARRIVE:
                return f"ENQUEUE without pending ARRIVE for packet {ev.packet_id}"
            state[ev.packet_id] = ENQUEUE
            fifo.append(ev.packet_id)
            occupied += 1
            if occupied > config.buffer_capacity:
                return f"occupancy {occupied} exceeds capacity at tick {ev.tick}"
        elif ev.kind == DEPART:
            if prev != ENQUEUE:
                return f"DEPART without ENQUEUE for packet {ev.packet_id}"
            if not fifo or fifo[0] != ev.packet_id:
                return f"DEPART out of FIFO order for packet {ev.packet_id}"
            fifo.popleft()
            occupied -= 1
            state[ev.packet_id] = DEPART
        else:
            return f"unknown event kind {ev.kind!r}"
    for packet_id, kind in state.items():
        if kind == ARRIVE:
            return f"packet {packet_id} arrived but was never resolved"
    return None


def replay_check(events: list[SimEvent], config: SimulationConfig) -> bool:
    return find_replay_violation(events, config) is None


def events_to_csv(events: list[SimEvent]) -> str:
    lines = ["tick,kind,packet_id"]
    lines.extend(f"{e.tick},{e.kind},{e.packet_id}" for e in events)
    return "\n".join(lines) + "\n"
