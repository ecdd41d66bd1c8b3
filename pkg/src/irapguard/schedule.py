"""Congestion schedules: periodic, seeded-random, and loss-calibrated.

A schedule is an ordered set of disjoint (start, duration) windows over a
tick horizon. `calibrate` searches the duty cycle of a periodic schedule
until the tail-drop baseline hits a target total packet-loss rate, which
is how the evaluation maps its loss grid onto congestion time.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, replace

from .errors import InvalidParams, InvalidPeriod, Unreachable

CALIBRATION_TOLERANCE_PP = 0.5
CALIBRATION_MAX_ITERS = 40
DEFAULT_CALIBRATION_PERIOD = 100


@dataclass(frozen=True)
class CongestionSchedule:
    windows: tuple[tuple[int, int], ...]
    horizon_ticks: int

    def __post_init__(self) -> None:
        prev_end = 0
        for start, duration in self.windows:
            if duration < 1:
                raise InvalidParams("window duration must be >= 1")
            if start < prev_end:
                raise InvalidParams("windows must be sorted and disjoint")
            if start + duration > self.horizon_ticks:
                raise InvalidParams("window exceeds horizon")
            prev_end = start + duration

    @property
    def congestion_fraction(self) -> float:
        if self.horizon_ticks == 0:
            return 0.0
        return sum(d for _, d in self.windows) / self.horizon_ticks

    def to_json_dict(self) -> dict:
        return {
            "horizon_ticks": self.horizon_ticks,
            "windows": [[s, d] for s, d in self.windows],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CongestionSchedule":
        try:
            windows = tuple((int(s), int(d)) for s, d in obj["windows"])
            horizon = int(obj["horizon_ticks"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParams(f"bad schedule JSON: {exc}") from exc
        return cls(windows=windows, horizon_ticks=horizon)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "CongestionSchedule":
        return cls.from_json_dict(json.loads(text))


def empty_schedule(horizon: int) -> CongestionSchedule:
    return CongestionSchedule(windows=(), horizon_ticks=horizon)


def _merge_adjacent(windows: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    # back-to-back windows are one congestion episode, not several notices
    merged: list[tuple[int, int]] = []
    for start, duration in windows:
        if merged and merged[-1][0] + merged[-1][1] == start:
            merged[-1] = (merged[-1][0], merged[-1][1] + duration)
        else:
            merged.append((start, duration))
    return tuple(merged)


def periodic_schedule(period: int, duration: int, horizon: int) -> CongestionSchedule:
    """Windows of `duration` ticks at t = 0, period, 2*period, ..."""
    if period < 1 or duration < 0 or duration > period or period > horizon:
        raise InvalidPeriod(
            f"need 0 <= duration <= period <= horizon, "
            f"got period={period} duration={duration} horizon={horizon}"
        )
    windows = []
    if duration > 0:
        for start in range(0, horizon, period):
            d = min(duration, horizon - start)
            if d > 0:
                windows.append((start, d))
    return CongestionSchedule(windows=_merge_adjacent(windows), horizon_ticks=horizon)


def duty_cycle_schedule(duty: float, period: int, horizon: int) -> CongestionSchedule:
    """Periodic schedule whose windows average `duty * period` ticks.

    Fractional duty is realized by alternating window lengths with an
    error accumulator, which gives the calibration search a much finer
    loss granularity than whole-tick durations.
    """
    if period < 1 or not 0.0 <= duty <= 1.0:
        raise InvalidPeriod(f"need period >= 1 and duty in [0, 1], got {period}, {duty}")
    windows = []
    target = duty * period
    k = 0
    for start in range(0, horizon, period):
        d = math.floor((k + 1) * target) - math.floor(k * target)
        k += 1
        d = min(d, horizon - start)
        if d > 0:
            windows.append((start, d))
    return CongestionSchedule(windows=_merge_adjacent(windows), horizon_ticks=horizon)


def random_schedule(
    mean_gap: int, mean_duration: int, horizon: int, seed: int
) -> CongestionSchedule:
    """Alternating geometric gap/window lengths, deterministic per seed."""
    if mean_gap < 1 or mean_duration < 1:
        raise InvalidParams("mean_gap and mean_duration must be >= 1")
    if horizon < 0:
        raise InvalidParams("horizon must be >= 0")
    rng = random.Random(seed)

    def geometric(mean: int) -> int:
        # support {1, 2, ...} with the requested mean
        p = 1.0 / mean
        u = rng.random()
        return 1 + int(math.log1p(-u) / math.log1p(-p)) if p < 1.0 else 1

    windows = []
    t = 0
    while t < horizon:
        t += geometric(mean_gap)
        if t >= horizon:
            break
        d = min(geometric(mean_duration), horizon - t)
        windows.append((t, d))
        t += d
    return CongestionSchedule(windows=tuple(windows), horizon_ticks=horizon)


def calibrate(
    target_loss_pct: float,
    config_template,
    packets,
    period: int = DEFAULT_CALIBRATION_PERIOD,
    tolerance_pp: float = CALIBRATION_TOLERANCE_PP,
    max_iters: int = CALIBRATION_MAX_ITERS,
) -> tuple[CongestionSchedule, float]:
    """Find a periodic schedule whose baseline total loss matches the target.

    Bisects the duty cycle in [0, 1], always measuring loss with the
    tail-drop policy so the target axis matches the baseline's loss.
    Returns the best schedule found and its achieved loss.
    """
    from .policy import TAIL_DROP
    from .simulator import run

    if not 0.0 <= target_loss_pct <= 100.0:
        raise InvalidParams("target_loss_pct must be in [0, 100]")
    if not packets:
        raise InvalidParams("packet list is empty")
    horizon = max(period, -(-len(packets) // config_template.input_rate))

    def measure(duty: float) -> tuple[CongestionSchedule, float]:
        sched = duty_cycle_schedule(duty, period, horizon)
        cfg = replace(config_template, policy=TAIL_DROP, schedule=sched)
        report, _ = run(cfg, packets)
        return sched, report.overall_packet_loss_pct

    if target_loss_pct == 0.0:
        return measure(0.0)

    sched_hi, loss_hi = measure(1.0)
    if loss_hi + tolerance_pp < target_loss_pct:
        raise Unreachable(
            f"even 100% congestion reaches only {loss_hi:.2f}% loss, "
            f"target {target_loss_pct:.2f}%"
        )
    best = (sched_hi, loss_hi)
    if abs(loss_hi - target_loss_pct) <= tolerance_pp:
        return best
    lo, hi = 0.0, 1.0
    for _ in range(max_iters):
        mid = (lo + hi) / 2.0
        sched, loss = measure(mid)
        if abs(loss - target_loss_pct) < abs(best[1] - target_loss_pct):
            best = (sched, loss)
        if abs(loss - target_loss_pct) <= tolerance_pp:
            return sched, loss
        if loss < target_loss_pct:
            lo = mid
        else:
            hi = mid
    return best
