"""Matplotlib figures for ROC and PU-metric curves."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .evaluation import CurveSeries  # noqa: E402

_STYLE = {
    "figure.figsize": (6.0, 4.5),
    "font.size": 10,
    "axes.labelsize": 11,
    "legend.fontsize": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
}


def plot_roc(curves: Mapping[str, CurveSeries], path: str | Path, title: str = "ROC") -> Path:
    """One line per ranking, AUC in the legend, chance diagonal dashed."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for name, c in curves.items():
            auc = c.meta.get("auc")
            label = f"{name} (AUC {auc:.3f})" if auc is not None else name
            ax.plot(c.x, c.y, lw=1.5, label=label)
        ax.plot([0, 1], [0, 1], ls="--", color="grey", lw=0.8)
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1.01)
        ax.set_xlabel("False positive rate")
        ax.set_ylabel("True positive rate")
        ax.set_title(title)
        ax.legend(loc="lower right")
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)
    return Path(path)


def plot_pu(curves: Mapping[str, CurveSeries], path: str | Path, title: str = "PU metric by rank") -> Path:
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for name, c in curves.items():
            ax.plot(c.x, c.y, lw=1.2, label=name)
        ax.set_xlabel("Rank k")
        ax.set_ylabel(r"$r^2 / \Pr[\mathrm{system\ positive}]$")
        ax.set_title(title)
        ax.legend(loc="upper right")
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)
    return Path(path)
