"""Figure output for experiment sweeps."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .experiment import ExperimentRow  # noqa: E402

__all__ = ["plot_tau_vs_degree"]


def plot_tau_vs_degree(rows: Sequence[ExperimentRow], path) -> None:
    """One panel per model: mean tau with std error bars against the d^2/n line."""
    models = list(dict.fromkeys(r.model for r in rows))
    fig, axes = plt.subplots(1, len(models), figsize=(4.5 * len(models), 3.6), squeeze=False)
    for ax, model in zip(axes[0], models):
        means = sorted((r for r in rows if r.model == model and r.seed == "mean"), key=lambda r: r.n)
        stds = {r.n: r for r in rows if r.model == model and r.seed == "std"}
        ns = [r.n for r in means]
        ax.errorbar(
            ns, [r.tau for r in means], yerr=[stds[n].tau if n in stds else 0 for n in ns],
            marker="o", capsize=3, label="tau (mean)",
        )
        ax.plot(ns, [r.d2_over_n for r in means], marker="s", linestyle="--", label="d^2/n (mean d)")
        ax.set_title(model)
        ax.set_xlabel("n")
        ax.grid(alpha=0.3)
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
