"""Figure rendering for the command-line report path.

Every plotting function takes already-computed data, writes a PNG next to
the delimited output, and returns the path.  matplotlib is forced onto the
Agg backend so the CLI works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "plot_branch",
    "plot_polytope_cloud",
    "plot_simulation",
    "plot_planar_scan",
]

_DIST_LABELS = ("a", "b1", "b2", "d1", "d2", "f")


def plot_branch(arclengths, distances, eigenvalues, out_path, title=None):
    """Distance components and force eigenvalues along a continued curve."""
    arclengths = np.asarray(arclengths)
    distances = np.asarray(distances)
    eigenvalues = np.asarray(eigenvalues)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.6, 3.6))
    for k, lab in enumerate(_DIST_LABELS):
        ax1.plot(arclengths, distances[:, k], label=lab, lw=1.2)
    ax1.set_xlabel("arclength")
    ax1.set_ylabel("squared distance")
    ax1.legend(fontsize=7, ncol=2)
    for k in range(eigenvalues.shape[1]):
        ax2.plot(arclengths, eigenvalues[:, k], lw=1.2)
    ax2.set_xlabel("arclength")
    ax2.set_ylabel("force matrix eigenvalues")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_polytope_cloud(nus, vertices, out_path, title=None):
    """Sampled frequency triples projected to (nu1, nu2), vertices marked."""
    nus = np.asarray(nus)
    fig, ax = plt.subplots(figsize=(5.4, 4.4))
    ax.scatter(nus[:, 0], nus[:, 1], s=2.0, alpha=0.25, linewidths=0, label="samples")
    for label, nu in vertices.items():
        ax.scatter([nu[0]], [nu[1]], marker="*", s=110, zorder=5)
        ax.annotate(label, (nu[0], nu[1]), textcoords="offset points", xytext=(5, 3))
    ax.set_xlabel(r"$\nu_1$")
    ax.set_ylabel(r"$\nu_2$")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_simulation(times, distances, out_path, title=None):
    """Six squared mutual distances along the integrated trajectory."""
    times = np.asarray(times)
    distances = np.asarray(distances)
    fig, ax = plt.subplots(figsize=(6.4, 3.8))
    for k, lab in enumerate(_DIST_LABELS):
        ax.plot(times, distances[:, k], label=lab, lw=1.0)
    ax.set_xlabel("time")
    ax.set_ylabel("squared distance")
    ax.legend(fontsize=7, ncol=3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_planar_scan(ratios, defects, roots, out_path, title=None):
    """Roundness defect of central planar rhombi against the mass ratio."""
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ax.plot(ratios, defects, lw=1.2)
    ax.axhline(0.0, color="k", lw=0.6)
    for r in roots:
        ax.axvline(r, color="tab:red", ls="--", lw=0.8)
    ax.set_xlabel("mass ratio m1/m2")
    ax.set_ylabel("m1 a - m2 f at the central rhombus")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
