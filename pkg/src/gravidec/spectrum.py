"""Graviton spectral density models, their moments, and the time filter.

Two spectral models are supported: the exponential form I0 * exp(-p/p_c)
and a linearly interpolated table that is zero outside its grid. Momenta
are natural-unit (inverse meters) throughout. The density itself carries
whatever (fixed) normalization makes the decoherence rate a rate; only the
product I0 * V is ever physically constrained, see the decoherence module.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .numerics import QuadratureResult, integrate_semi_infinite


@dataclass(frozen=True)
class ExponentialSpectrum:
    """I(p) = i0 * exp(-p / p_c), with p_c in inverse meters."""

    i0: float
    p_c: float

    def __post_init__(self):
        if self.i0 < 0:
            raise ValueError(f"spectral amplitude must be nonnegative, got {self.i0}")
        if self.p_c <= 0:
            raise ValueError(f"momentum cutoff must be positive, got {self.p_c}")

    def value(self, p):
        p = np.asarray(p, dtype=float)
        if np.any(p < 0):
            raise ValueError("momentum must be nonnegative")
        out = self.i0 * np.exp(-p / self.p_c)
        return float(out) if out.ndim == 0 else out

    @property
    def decay_scale(self) -> float:
        return self.p_c

    @property
    def support_cut(self) -> float:
        """Momentum beyond which the density is numerically negligible."""
        return 60.0 * self.p_c


@dataclass(frozen=True)
class TabulatedSpectrum:
    """Linear interpolation on an ascending momentum grid, zero outside it."""

    momenta: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.momenta, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if p.ndim != 1 or p.size < 2:
            raise ValueError("tabulated spectrum needs at least 2 grid points")
        if np.any(np.diff(p) <= 0):
            raise ValueError("momentum grid must be strictly ascending")
        if np.any(p < 0):
            raise ValueError("momentum grid must be nonnegative")
        if np.any(v < 0):
            raise ValueError("spectral values must be nonnegative")
        object.__setattr__(self, "momenta", p)
        object.__setattr__(self, "values", v)

    def value(self, p):
        p = np.asarray(p, dtype=float)
        if np.any(p < 0):
            raise ValueError("momentum must be nonnegative")
        out = np.interp(p, self.momenta, self.values, left=0.0, right=0.0)
        inside = (p >= self.momenta[0]) & (p <= self.momenta[-1])
        out = np.where(inside, out, 0.0)
        return float(out) if out.ndim == 0 else out

    @property
    def decay_scale(self) -> float:
        return float(self.momenta[-1] - self.momenta[0]) or float(self.momenta[-1])

    @property
    def support_cut(self) -> float:
        return float(self.momenta[-1])

    @classmethod
    def from_csv(cls, path: str | Path) -> "TabulatedSpectrum":
        """Load a two-column CSV (p_inv_m, intensity); a header row is allowed."""
        rows = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split(",")
                if len(parts) != 2:
                    raise ValueError(f"expected two columns, got {line!r}")
                try:
                    rows.append((float(parts[0]), float(parts[1])))
                except ValueError:
                    if rows:
                        raise ValueError(f"non-numeric row {line!r}") from None
                    continue  # header row
        if len(rows) < 2:
            raise ValueError("spectrum CSV needs at least 2 data rows")
        data = np.asarray(rows)
        return cls(data[:, 0], data[:, 1])


GravitonSpectrum = Union[ExponentialSpectrum, TabulatedSpectrum]


def eval(s: GravitonSpectrum, p):  # noqa: A001 - spec'd operation name
    """Spectral density at momentum p (inverse meters)."""
    return s.value(p)


def second_moment(s: GravitonSpectrum) -> float:
    """The momentum integral int_0^inf p^2 I(p) dp / (2 pi^2).

    Closed form for the exponential model; exact piecewise-polynomial
    integration for tables.
    """
    if isinstance(s, ExponentialSpectrum):
        return s.i0 * 2.0 * s.p_c**3 / (2.0 * np.pi**2)
    # p^2 * (linear in p) is cubic on each segment; integrate exactly.
    p, v = s.momenta, s.values
    total = 0.0
    for a, b, va, vb in zip(p[:-1], p[1:], v[:-1], v[1:]):
        slope = (vb - va) / (b - a)
        intercept = va - slope * a
        total += intercept * (b**3 - a**3) / 3.0 + slope * (b**4 - a**4) / 4.0
    return total / (2.0 * np.pi**2)


def second_moment_quadrature(s: GravitonSpectrum, rel_tol: float = 1e-10) -> QuadratureResult:
    """Adaptive-quadrature route for cross-checking `second_moment`."""
    knots = None
    if isinstance(s, TabulatedSpectrum):
        knots = [float(x) for x in s.momenta if x > 0]
    res = integrate_semi_infinite(lambda p: p * p * s.value(p), rel_tol,
                                  breakpoints=knots, scale=s.decay_scale)
    return QuadratureResult(res.value / (2.0 * np.pi**2),
                            res.abs_error_estimate / (2.0 * np.pi**2),
                            res.evaluations)


def graviton_number(s: GravitonSpectrum, volume: float) -> float:
    """Total graviton number in a normalization volume (m^3)."""
    if volume <= 0:
        raise ValueError(f"normalization volume must be positive, got {volume}")
    return volume * second_moment(s)


def time_filter(p: float, tau0: float) -> complex:
    """Finite-window filter: integral of exp(-i p tau) over [0, tau0].

    Equals exp(-i p tau0 / 2) * 2 sin(p tau0 / 2) / p, with the limit tau0
    at p = 0. The modulus is bounded by tau0 for all p.
    """
    if tau0 < 0:
        raise ValueError(f"window length must be nonnegative, got {tau0}")
    x = 0.5 * p * tau0
    # tau0 * sinc(x) * exp(-i x); np.sinc is the normalized sinc.
    return complex(tau0 * np.sinc(x / np.pi) * np.exp(-1j * x))
