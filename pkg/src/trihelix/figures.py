"""Trajectory chart rendering. File output only, no interactive backend."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .decomp import PanelPoint
from .infomeasure import UnitScale


def render_panel_chart(
    points: list[PanelPoint],
    path: str | Path,
    *,
    unit: UnitScale = UnitScale.BITS,
    title: str = "Entropy and redundancy over time",
) -> Path:
    """Draw H_max, H_obs (with the unrealized-options band between them)
    and the mutual redundancy trajectory; write the figure to ``path``.

    The output format follows the file extension (svg, png, pdf, ...).
    """
    path = Path(path)
    scale = 1000.0 if unit == UnitScale.MBITS else 1.0
    ylabel = "mbits" if unit == UnitScale.MBITS else "bits"
    periods = [p.period for p in points]
    h_obs = [p.H_obs * scale for p in points]
    h_max = [p.H_max * scale for p in points]
    r_n = [p.R_n * scale for p in points]

    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    x = range(len(points))
    ax.plot(x, h_max, color="#4c72b0", linewidth=2.0, label="H_max (option space)")
    ax.plot(x, h_obs, color="#55a868", linewidth=2.0, label="H_obs (realized)")
    ax.fill_between(
        x, h_obs, h_max, color="#4c72b0", alpha=0.15, label="redundancy (H_max - H_obs)"
    )
    ax.plot(
        x, r_n, color="#c44e52", linewidth=1.8, linestyle="--",
        label="R_n (mutual redundancy)",
    )
    ax.axhline(0.0, color="#888888", linewidth=0.8)
    ax.set_xticks(list(x))
    ax.set_xticklabels(periods, rotation=30 if len(periods) > 8 else 0, ha="right" if len(periods) > 8 else "center")
    ax.set_xlabel("period")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.2, linewidth=0.5)
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
