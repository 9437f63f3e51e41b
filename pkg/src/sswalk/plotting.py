"""Matplotlib figure rendering for scenario and verification reports.

Figures are written to files next to the CSV output; nothing interactive.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_scenario_figures(result, out_dir):
    """Probability heatmap (with cone overlay when present) and final profile."""
    from pathlib import Path

    out = Path(out_dir)
    lattice = result.lattice
    x = lattice.positions
    profiles = result.trajectory.profiles
    n_steps = profiles.shape[0] - 1
    written = []

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    im = ax.imshow(
        profiles,
        origin="lower",
        aspect="auto",
        extent=[x[0], x[-1], 0, n_steps],
        cmap="inferno",
        vmax=np.percentile(profiles, 99.5),
    )
    if result.cone is not None:
        steps = np.arange(n_steps + 1)
        ax.plot(np.clip(result.cone[:, 0], x[0], x[-1]), steps, "w--", lw=1.0)
        ax.plot(np.clip(result.cone[:, 1], x[0], x[-1]), steps, "w--", lw=1.0)
    ax.set_xlabel("position x")
    ax.set_ylabel("step")
    ax.set_title(f"{result.spec.name}: probability map")
    fig.colorbar(im, ax=ax, label="p(x, t)")
    heatmap = out / "probability_map.png"
    fig.savefig(heatmap, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(heatmap.name)

    fig, ax = plt.subplots(figsize=(7.0, 3.2))
    ax.plot(x, profiles[-1], lw=0.9)
    ax.set_xlabel("position x")
    ax.set_ylabel(f"p(x) after {n_steps} steps")
    ax.set_title(f"{result.spec.name}: final profile")
    final = out / "final_profile.png"
    fig.savefig(final, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(final.name)
    return written


def render_convergence_figure(reports, out_path):
    """Log-log error vs L for a set of labeled convergence reports."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, report in reports:
        ax.loglog(report.L_values, report.errors, "o-", label=f"{label} (slope {report.slope:.2f})")
    ax.set_xlabel("L (inverse step size)")
    ax.set_ylabel("smooth-state action error")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
