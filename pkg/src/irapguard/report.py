"""Aggregate paired baseline/policy runs into tabular comparisons.

Every sweep cell pairs a tail-drop run with a content-aware run on the
same packets and schedule; the aggregate views are the (baseline IRAP
loss, policy IRAP loss) point cloud, its means, the relative reduction,
an OLS fit, and group-by summaries over user tags such as resolution or
QP.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyInput
from .simulator import RunReport

CELLS_CSV_HEADER = (
    "stream_id,codec,payload_size,packets_per_irap_nal_mean,"
    "tag_resolution,tag_qp,target_loss_pct,seed,"
    "baseline_total_loss_pct,baseline_irap_packet_loss_pct,"
    "baseline_irap_nal_loss_pct,policy_total_loss_pct,"
    "policy_irap_packet_loss_pct,policy_irap_nal_loss_pct"
)


@dataclass
class SweepCell:
    stream_id: str
    codec: str
    payload_size: int
    packets_per_irap_nal_mean: float
    target_loss_pct: float
    seed: int
    baseline: RunReport
    policy: RunReport
    tags: dict[str, str] = field(default_factory=dict)

    @property
    def x(self) -> float:
        return self.baseline.irap_packet_loss_pct

    @property
    def y(self) -> float:
        return self.policy.irap_packet_loss_pct


def _ols(xs: list[float], ys: list[float]) -> tuple[float, float]:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0.0:
        return 0.0, my
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return slope, my - slope * mx


def _pair_summary(cells: list[SweepCell]) -> dict:
    xs = [c.x for c in cells]
    ys = [c.y for c in cells]
    mean_x = sum(xs) / len(xs)
    mean_y = sum(ys) / len(ys)
    slope, intercept = _ols(xs, ys)
    return {
        "n_cells": len(cells),
        "mean_baseline_irap_packet_loss_pct": mean_x,
        "mean_policy_irap_packet_loss_pct": mean_y,
        "reduction_pct": 100.0 * (mean_x - mean_y) / mean_x if mean_x > 0 else 0.0,
        "regression": {"slope": slope, "intercept": intercept},
    }


def aggregate(cells: list[SweepCell]) -> dict:
    """Grand means, reduction, OLS fit, and per-tag group summaries."""
    if not cells:
        raise EmptyInput("no sweep cells to aggregate")
    summary = _pair_summary(cells)
    tag_names = sorted({name for c in cells for name in c.tags})
    by_tag: dict[str, dict] = {}
    for name in tag_names:
        groups: dict[str, list[SweepCell]] = {}
        for c in cells:
            if name in c.tags:
                groups.setdefault(c.tags[name], []).append(c)
        by_tag[name] = {value: _pair_summary(g) for value, g in sorted(groups.items())}
    summary["by_tag"] = by_tag
    return summary


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def _cell_row(c: SweepCell) -> str:
    return ",".join(
        [
            c.stream_id,
            c.codec,
            str(c.payload_size),
            _fmt(c.packets_per_irap_nal_mean),
            c.tags.get("resolution", ""),
            c.tags.get("qp", ""),
            _fmt(c.target_loss_pct),
            str(c.seed),
            _fmt(c.baseline.overall_packet_loss_pct),
            _fmt(c.baseline.irap_packet_loss_pct),
            _fmt(c.baseline.irap_nal_loss_pct),
            _fmt(c.policy.overall_packet_loss_pct),
            _fmt(c.policy.irap_packet_loss_pct),
            _fmt(c.policy.irap_nal_loss_pct),
        ]
    )


def write_outputs(summary: dict, cells: list[SweepCell], out_dir: Path) -> dict[str, Path]:
    """Write cells.csv, summary.json and scatter.csv; deterministic bytes."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    cells_path = out_dir / "cells.csv"
    lines = [CELLS_CSV_HEADER]
    lines.extend(_cell_row(c) for c in cells)
    cells_path.write_text("\n".join(lines) + "\n")

    summary_path = out_dir / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")

    scatter_path = out_dir / "scatter.csv"
    rows = ["x,y,stream_id,tag_resolution,tag_qp,target_loss_pct"]
    rows.extend(
        ",".join(
            [
                _fmt(c.x),
                _fmt(c.y),
                c.stream_id,
                c.tags.get("resolution", ""),
                c.tags.get("qp", ""),
                _fmt(c.target_loss_pct),
            ]
        )
        for c in cells
    )
    scatter_path.write_text("\n".join(rows) + "\n")

    return {"cells": cells_path, "summary": summary_path, "scatter": scatter_path}
