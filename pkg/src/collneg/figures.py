"""Matplotlib rendering for report output (written to files, never shown)."""

from __future__ import annotations

from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .metrics import Metrics  # noqa: E402

__all__ = ["scatter_figure", "trend_figure", "RESIDUAL_BINS"]

RESIDUAL_BINS = 50


def scatter_figure(
    actual: np.ndarray,
    predicted: np.ndarray,
    m: Metrics,
    label: str,
    path: str | Path,
) -> None:
    """Predicted-vs-actual scatter with a +-tau band and a residual histogram inset."""
    fig, ax = plt.subplots(figsize=(5.2, 5.0))
    line = np.array([0.0, 1.0])
    ax.fill_between(line, line - m.tau, line + m.tau, color="limegreen", alpha=0.35, lw=0)
    ax.plot(line, line, color="limegreen", lw=1.0)
    ax.plot(actual, predicted, ",", color="black", alpha=0.35, rasterized=True)
    ax.set_xlabel("actual negativity")
    ax.set_ylabel("predicted negativity")
    ax.set_xlim(0, 1)
    ax.set_ylim(min(-0.1, float(np.min(predicted))), max(1.05, float(np.max(predicted))))
    ax.set_title(f"{label}: $R^2$ = {m.r2:.3f}, $\\tau$ = {m.tau:.3f}")

    inset = ax.inset_axes([0.08, 0.62, 0.34, 0.3])
    inset.hist(actual - predicted, bins=RESIDUAL_BINS, color="black")
    inset.set_xlabel("residual", fontsize=7)
    inset.tick_params(labelsize=6)
    inset.set_yticks([])

    fig.tight_layout()
    fig.savefig(path, dpi=200)
    plt.close(fig)


def trend_figure(
    series: dict[str, tuple[list[int], list[float], list[float]]],
    path: str | Path,
) -> None:
    """R2 (back columns) and tau (front columns) against the feature count.

    ``series`` maps a model kind to (feature counts, R2 values, tau values).
    """
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    kinds = sorted(series)
    width = 0.8 / max(1, len(kinds))
    all_bs = sorted({b for bs, _, _ in series.values() for b in bs})
    for k, kind in enumerate(kinds):
        bs, r2s, taus = series[kind]
        xs = np.asarray(bs, dtype=float) + (k - (len(kinds) - 1) / 2) * width
        ax.bar(xs, r2s, width=width, color="black",
               alpha=0.9 - 0.35 * k, label=f"$R^2$ ({kind})")
        ax.bar(xs, taus, width=width * 0.8, color="red",
               alpha=0.9 - 0.35 * k, label=f"$\\tau$ ({kind})")
    ax.set_xlabel("number of measurement configurations")
    ax.set_ylabel("$R^2$ / $\\tau$")
    ax.set_xticks(all_bs)
    ax.set_ylim(0, 1.05)
    ax.legend(fontsize=8, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=200)
    plt.close(fig)
