"""Render sweep figures (baseline vs. policy IRAP packet loss)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .report import SweepCell

_XLABEL = "baseline IRAP packet loss (%)"
_YLABEL = "content-aware IRAP packet loss (%)"


def _axes_with_identity(ax, xs: list[float], ys: list[float]) -> None:
    hi = max(max(xs, default=1.0), max(ys, default=1.0), 1.0) * 1.05
    ax.plot([0, hi], [0, hi], linestyle="--", color="gray", linewidth=1, label="y = x")
    ax.set_xlim(0, hi)
    ax.set_ylim(0, hi)
    ax.set_xlabel(_XLABEL)
    ax.set_ylabel(_YLABEL)
    ax.grid(True, alpha=0.3)


def render_figures(
    cells: list[SweepCell], summary: dict, out_dir: Path
) -> list[Path]:
    """Write scatter.png plus one grouped scatter per tag present."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    xs = [c.x for c in cells]
    ys = [c.y for c in cells]
    written: list[Path] = []

    fig, ax = plt.subplots(figsize=(6, 5))
    _axes_with_identity(ax, xs, ys)
    ax.scatter(xs, ys, s=14, alpha=0.7)
    reg = summary["regression"]
    hi = ax.get_xlim()[1]
    ax.plot(
        [0, hi],
        [reg["intercept"], reg["intercept"] + reg["slope"] * hi],
        color="C1",
        linewidth=1.5,
        label=f"fit: y = {reg['slope']:.3f}x + {reg['intercept']:.2f}",
    )
    ax.legend(loc="upper left")
    path = out_dir / "scatter.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    for tag_name in sorted(summary.get("by_tag", {})):
        groups: dict[str, list[SweepCell]] = {}
        for c in cells:
            if tag_name in c.tags:
                groups.setdefault(c.tags[tag_name], []).append(c)
        if not groups:
            continue
        fig, ax = plt.subplots(figsize=(6, 5))
        _axes_with_identity(ax, xs, ys)
        for value, group in sorted(groups.items()):
            ax.scatter(
                [c.x for c in group],
                [c.y for c in group],
                s=14,
                alpha=0.7,
                label=f"{tag_name}={value}",
            )
        ax.legend(loc="upper left", fontsize=8)
        path = out_dir / f"scatter_by_{tag_name}.png"
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    return written
