"""Sweep figures: MMRE and Pred(25) against the fuzziness control threshold."""

from __future__ import annotations

from pathlib import Path

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .evaluation import MMRE_TARGET, PRED25_TARGET, EvaluationReport
from .fuzzy import FuzzyPartition

MARKERS = ("o", "s", "^", "D", "v")


def _new_figure(width=6.0, height=4.0):
    fig = Figure(figsize=(width, height), facecolor="w")
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    ax.grid(True, linestyle=":", linewidth=0.6)
    return fig, ax


def _plot_metric(report: EvaluationReport, metric: str, ylabel: str, target: float, path: Path):
    fig, ax = _new_figure()
    for i, k in enumerate(report.class_counts()):
        rows = report.series(k)
        ax.plot(
            [r.threshold for r in rows],
            [getattr(r, metric) for r in rows],
            marker=MARKERS[i % len(MARKERS)],
            label=f"{k} effort sets",
        )
    ax.axhline(target, color="0.4", linestyle="--", linewidth=1.0, label=f"target {target:g}")
    ax.set_xlabel("fuzziness control threshold")
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    return path


def plot_sweep(report: EvaluationReport, stem) -> list[Path]:
    """Write ``<stem>_mmre.png`` and ``<stem>_pred25.png``; return their paths."""
    stem = Path(stem)
    return [
        _plot_metric(report, "mmre", "MMRE (%)", MMRE_TARGET, stem.with_name(stem.name + "_mmre.png")),
        _plot_metric(report, "pred25", "Pred(25) (%)", PRED25_TARGET, stem.with_name(stem.name + "_pred25.png")),
    ]


def plot_partition(partition: FuzzyPartition, path, title: str = ""):
    fig, ax = _new_figure(6.0, 2.5)
    for s in partition:
        ax.plot([s.a, s.b, s.c, s.d], [0.0, 1.0, 1.0, 0.0], linewidth=1.2)
        ax.text((s.b + s.c) / 2, 1.04, s.label, ha="center", fontsize=7)
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.15)
    ax.set_xlabel("normalized value")
    ax.set_ylabel("membership")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    return Path(path)
