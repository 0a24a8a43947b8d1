"""Figure rendering for analysis reports.

Two figures per grid size land next to the delimited output: a spectral
decay plot (eigenvalue moduli of the resolvent family on log-log axes
with the fitted power law) and a numerical-range portrait (sampled range,
sector boundary, operator eigenvalues).
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .pipeline import AnalysisReport, SizeResult

__all__ = ["render_figures", "decay_figure", "range_figure"]

plt.rcParams.update({
    "figure.figsize": (6.4, 4.8),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 130,
})


def decay_figure(result: SizeResult):
    """Log-log decay of the resolvent-family spectra with the fitted slope."""
    fig, ax = plt.subplots()
    idx = np.arange(1, result.size + 1)
    series = [
        ("inverse_hermitian", "inverse Hermitian part", "o"),
        ("resolvent_real_part", "resolvent real part", "s"),
        ("resolvent", "resolvent modulus", "^"),
    ]
    for label, name, marker in series:
        table = result.spectra.get(label)
        if table is None:
            continue
        moduli = np.abs(np.asarray(table["eigenvalues"]))
        ax.loglog(idx, np.sort(moduli)[::-1], marker, markersize=3, linestyle="none", label=name)
    if result.fit is not None:
        lo, hi = result.fit.window
        span = np.array([lo, hi], dtype=float)
        anchor = np.abs(np.asarray(result.spectra["inverse_hermitian"]["eigenvalues"]))
        anchor = np.sort(anchor)[::-1][lo - 1]
        ax.loglog(
            span,
            anchor * (span / lo) ** (-result.fit.exponent),
            "k--",
            label=f"fit exponent {result.fit.exponent:.3f}",
        )
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue magnitude")
    ax.set_title(f"spectral decay, n = {result.size}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def range_figure(result: SizeResult):
    """Numerical-range sample of the operator with the sector overlay."""
    fig, ax = plt.subplots()
    table = result.spectra["operator"]
    eigs = np.asarray(table["eigenvalues"], dtype=complex)
    ax.plot(eigs.real, eigs.imag, "x", color="crimson", label="eigenvalues")
    if result.sector is not None:
        vertex = result.sector.vertex
        slope = np.tan(result.sector.half_angle)
        reach = float(np.max(eigs.real) - min(vertex, 0.0)) * 1.1 + 1e-12
        xs = np.linspace(vertex, vertex + reach, 64)
        ax.plot(xs, slope * (xs - vertex), "k-", linewidth=1, label="sector boundary")
        ax.plot(xs, -slope * (xs - vertex), "k-", linewidth=1)
    if result.aperture:
        reach = float(np.max(eigs.real)) * 1.05
        xs = np.linspace(0, reach, 16)
        ax.plot(xs, np.tan(result.aperture) * xs, "b:", linewidth=1, label="sampled aperture")
        ax.plot(xs, -np.tan(result.aperture) * xs, "b:", linewidth=1)
    ax.axhline(0.0, color="gray", linewidth=0.5)
    ax.axvline(0.0, color="gray", linewidth=0.5)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"spectrum and sector, n = {result.size}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def render_figures(report: AnalysisReport, out_dir: str) -> list:
    """Render per-size figures to PNG files, returning the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for result in report.size_results:
        if not result.spectra:
            continue
        for maker, stem in ((decay_figure, "decay"), (range_figure, "range")):
            fig = maker(result)
            path = os.path.join(out_dir, f"{stem}_n{result.size}.png")
            fig.savefig(path)
            plt.close(fig)
            written.append(path)
    return written
