"""Static figure rendering for pipeline reports.

Everything draws to files through the Agg backend; no display is required.
One figure per period for degrees and training loss, plus one shared
anomaly-count-by-q figure.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_DPI = 150


def render_degree_figure(
    rank_rows: list[tuple[int, int]],
    count_rows: list[tuple[int, int]],
    period: str,
    path: Path,
) -> Path:
    """Degree rank curve and degree histogram for one period's graph."""
    fig, (ax_rank, ax_dist) = plt.subplots(1, 2, figsize=(9, 3.5))
    ranks = [r for r, _ in rank_rows]
    degs = [d for _, d in rank_rows]
    ax_rank.plot(ranks, degs, drawstyle="steps-post", color="tab:blue")
    ax_rank.set_xlabel("rank")
    ax_rank.set_ylabel("degree")
    ax_rank.set_title(f"degree rank ({period})")

    xs = [d for d, _ in count_rows]
    ys = [c for _, c in count_rows]
    ax_dist.bar(xs, ys, width=0.8, color="tab:orange")
    ax_dist.set_xlabel("degree")
    ax_dist.set_ylabel("node count")
    ax_dist.set_title(f"degree distribution ({period})")

    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def render_trace_figure(losses: tuple[float, ...], period: str, path: Path) -> Path:
    """Training loss curve for one period."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(range(len(losses)), losses, color="tab:green")
    ax.set_xlabel("epoch")
    ax.set_ylabel("mean reconstruction MSE")
    ax.set_yscale("log")
    ax.set_title(f"training loss ({period})")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def render_sweep_figure(
    counts_by_period: dict[str, list[tuple[float, int]]], path: Path
) -> Path:
    """Anomaly count against q, one line per period."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for period, rows in counts_by_period.items():
        qs = [q for q, _ in rows]
        ns = [n for _, n in rows]
        ax.plot(qs, ns, marker="o", label=period)
    ax.set_xlabel("q")
    ax.set_ylabel("anomaly count")
    ax.set_title("anomalies by period")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
