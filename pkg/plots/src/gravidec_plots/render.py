"""Figure rendering for the sweep and decay CSV artifacts.

Images are deterministic for fixed inputs: the Agg backend is forced and
the PNG Software metadata chunk is stripped, so repeated renders of the
same CSV are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .tables import DecaySeries, SweepTable  # noqa: E402

ELECTRON_MASS_KG = 9.1093837015e-31
NUCLEON_MASS_KG = 1.67262192369e-27

_SAVE_KWARGS = dict(dpi=120, metadata={"Software": None})


@dataclass(frozen=True)
class ContourInfo:
    levels: tuple[float, ...]          # log10(tau) decade levels drawn
    electron_line_drawn: bool
    physical_line_drawn: bool


def build_contour_figure(table: SweepTable):
    """Log-log contour of tau_dec over the (M, N) plane.

    Returns (figure, ContourInfo); the caller owns the figure.
    """
    log_m = np.log10(table.masses)
    log_n = np.log10(table.counts)
    with np.errstate(divide="ignore"):
        log_tau = np.log10(table.tau)

    finite = np.isfinite(log_tau)
    lo = float(np.floor(log_tau[finite].min()))
    hi = float(np.ceil(log_tau[finite].max()))
    levels = np.arange(lo, hi + 1.0)
    if levels.size > 40:   # keep decade labels readable on huge ranges
        step = int(np.ceil(levels.size / 40))
        levels = levels[::step]

    fig, ax = plt.subplots(figsize=(7.0, 5.4))
    filled = ax.contourf(log_m, log_n, log_tau.T, levels=levels, cmap="viridis")
    lines = ax.contour(log_m, log_n, log_tau.T, levels=levels,
                       colors="black", linewidths=0.4)
    ax.clabel(lines, fmt=lambda v: rf"$10^{{{v:.0f}}}$ s", fontsize=7)
    fig.colorbar(filled, ax=ax, label=r"$\log_{10}\,\tau_{\mathrm{dec}}$ [s]")

    electron_drawn = False
    if log_m.min() <= np.log10(ELECTRON_MASS_KG) <= log_m.max():
        ax.axvline(np.log10(ELECTRON_MASS_KG), color="white", linestyle="--",
                   linewidth=1.2, label="electron mass")
        electron_drawn = True

    # N = M / m_nucleon within the plotted window
    line_m = np.linspace(log_m.min(), log_m.max(), 200)
    line_n = line_m - np.log10(NUCLEON_MASS_KG)
    inside = (line_n >= log_n.min()) & (line_n <= log_n.max())
    physical_drawn = bool(inside.any())
    if physical_drawn:
        ax.plot(line_m[inside], line_n[inside], color="red", linewidth=1.4,
                label=r"$N = M / m_N$")

    ax.set_xlabel(r"$\log_{10} M$ [kg]")
    ax.set_ylabel(r"$\log_{10} N$")
    ax.set_title("Decoherence time over the mass / constituent-number plane")
    if electron_drawn or physical_drawn:
        ax.legend(loc="upper left", fontsize=8)
    info = ContourInfo(tuple(float(v) for v in levels), electron_drawn,
                       physical_drawn)
    return fig, info


def render_contour(table: SweepTable, out_path: str | Path) -> ContourInfo:
    fig, info = build_contour_figure(table)
    try:
        fig.savefig(out_path, **_SAVE_KWARGS)
    finally:
        plt.close(fig)
    return info


@dataclass(frozen=True)
class DecayInfo:
    fitted_rate: float     # -slope of the semilog coherence line, 1/s
    points_used: int


def build_decay_figure(series: DecaySeries):
    """Semilog coherence decay with a straight-line fit.

    Returns (figure, DecayInfo). The fitted rate comes from a least-squares
    line through log|rho12| over the points where the coherence is positive.
    """
    positive = series.coherence > 0
    t = series.t[positive]
    log_c = np.log(series.coherence[positive])
    if t.size >= 2 and np.ptp(t) > 0:
        slope, _ = np.polyfit(t, log_c, 1)
        rate = float(-slope)
    else:
        rate = 0.0

    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    ax.semilogy(series.t, np.where(series.coherence > 0, series.coherence, np.nan),
                marker=".", linestyle="-", label=r"$|\rho_{12}(t)|$")
    if rate != 0.0 and series.coherence[0] > 0:
        ax.semilogy(series.t, series.coherence[0] * np.exp(-rate * series.t),
                    linestyle="--",
                    label=rf"fit: $\Gamma = {rate:.4g}\ \mathrm{{s}}^{{-1}}$")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("coherence magnitude")
    ax.set_title("Coherence decay")
    ax.legend()
    return fig, DecayInfo(rate, int(t.size))


def render_decay(series: DecaySeries, out_path: str | Path) -> DecayInfo:
    fig, info = build_decay_figure(series)
    try:
        fig.savefig(out_path, **_SAVE_KWARGS)
    finally:
        plt.close(fig)
    return info
