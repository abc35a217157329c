"""Matplotlib rendering of analysis and simulation results to image files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import StabilityReport
from .simulation import SimulationResult, distance_energy_profile, energy_profile

__all__ = [
    "save_nyquist_figure",
    "save_gain_figure",
    "save_trajectory_figure",
    "save_energy_figure",
]


def save_nyquist_figure(
    omegas: np.ndarray,
    values: np.ndarray,
    threshold: float,
    path: str | Path,
) -> Path:
    """Locus of T(jw) with its conjugate branch and the vertical pass/fail line."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    ax.plot(values.real, values.imag, color="tab:blue", lw=1.2, label="T(jw), w > 0")
    ax.plot(values.real, -values.imag, color="tab:blue", lw=0.8, ls="--", alpha=0.6)
    if np.isfinite(threshold):
        ax.axvline(threshold, color="tab:red", lw=1.2, label=f"Re = {threshold:.4g}")
    ax.axhline(0.0, color="0.7", lw=0.6)
    ax.axvline(0.0, color="0.7", lw=0.6)
    ax.set_xlabel("Re T(jw)")
    ax.set_ylabel("Im T(jw)")
    ax.set_title("Subsystem locus against the coupling threshold")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_gain_figure(report: StabilityReport, path: str | Path) -> Path:
    """Per-vertex peak loop gains against the certification line at 1."""
    path = Path(path)
    checked = [c for c in report.checks if not c.exempt]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if checked:
        verts = [c.vertex for c in checked]
        gains = [c.sup_gain if c.sup_gain is not None else np.nan for c in checked]
        colors = ["tab:green" if c.passed else "tab:red" for c in checked]
        finite = [g if np.isfinite(g) else 0.0 for g in gains]
        ax.bar([str(v) for v in verts], finite, color=colors)
        for x, g in zip(range(len(verts)), gains):
            if not np.isfinite(g):
                ax.text(x, 0.05, "unstable", rotation=90, ha="center", color="white")
    ax.axhline(1.0, color="k", lw=1.0, ls="--", label="gain = 1")
    ax.set_xlabel("vertex")
    ax.set_ylabel("sup gain")
    ax.set_title(f"Local loop gains ({report.status})")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_trajectory_figure(result: SimulationResult, path: str | Path) -> Path:
    """Per-vertex output magnitude over time, the source dashed."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for v in result.net.graph.vertices:
        y = result.output_of(v)
        mag = np.linalg.norm(y, axis=1) if y.shape[1] > 1 else y[:, 0]
        style = "--" if v == result.source else "-"
        ax.plot(result.times, mag, style, lw=0.9, label=f"vertex {v}")
    ax.set_xlabel("t")
    ax.set_ylabel("output")
    ax.set_title(f"Outputs, disturbance at vertex {result.source}")
    ax.legend(loc="best", fontsize=8, ncols=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_energy_figure(result: SimulationResult, path: str | Path) -> Path:
    """Cumulative energies per vertex next to the peak energy per hop distance."""
    path = Path(path)
    profile = energy_profile(result)
    shells = distance_energy_profile(result)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    for v in result.net.graph.vertices:
        ax1.plot(profile.times, profile.prefix[v - 1], lw=0.9, label=f"vertex {v}")
    ax1.set_xlabel("t")
    ax1.set_ylabel("energy up to t")
    ax1.set_title("Cumulative output energy")
    ax1.legend(loc="best", fontsize=8, ncols=2)
    ax2.plot(shells.radii, shells.energies, "o-", color="tab:purple")
    ax2.set_xlabel("hops from source")
    ax2.set_ylabel("max final energy")
    verdict = "non-increasing" if shells.non_increasing else "INCREASES"
    ax2.set_title(f"Energy by distance ({verdict})")
    ax2.set_xticks(shells.radii)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
