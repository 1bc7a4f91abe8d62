"""Parsers for the documented CSV contracts.

This package reads files only; it shares no code or memory with the
producer. Headers are matched exactly so a drifting contract fails loudly
instead of rendering nonsense.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

SWEEP_HEADER = "M_kg,N,gamma_hz,tau_s,regime,on_physical_line"
DECAY_HEADER = "t_s,rho11,rho22,re_rho12,im_rho12"


class SchemaError(ValueError):
    """CSV does not satisfy the documented contract."""


def _read_rows(path: str | Path, expected_header: str) -> list[list[str]]:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty file")
    if lines[0] != expected_header:
        raise SchemaError(
            f"{path}: header {lines[0]!r} does not match the contract "
            f"{expected_header!r}")
    return [ln.split(",") for ln in lines[1:]]


@dataclass(frozen=True)
class SweepTable:
    """Sweep rows pivoted onto a complete rectangular (M, N) grid."""

    masses: np.ndarray        # (n_m,) ascending, kg
    counts: np.ndarray        # (n_n,) ascending
    tau: np.ndarray           # (n_m, n_n) decoherence times, s
    gamma: np.ndarray         # (n_m, n_n) rates, Hz
    regime: np.ndarray        # (n_m, n_n) labels
    on_physical_line: np.ndarray  # (n_m, n_n) bool

    @classmethod
    def from_csv(cls, path: str | Path) -> "SweepTable":
        rows = _read_rows(path, SWEEP_HEADER)
        if not rows:
            raise SchemaError(f"{path}: no data rows")
        try:
            m = np.array([float(r[0]) for r in rows])
            n = np.array([float(r[1]) for r in rows])
            gamma = np.array([float(r[2]) for r in rows])
            tau = np.array([float(r[3]) for r in rows])
            regime = np.array([r[4] for r in rows])
            flag = np.array([r[5] == "1" for r in rows])
        except (IndexError, ValueError) as exc:
            raise SchemaError(f"{path}: malformed row ({exc})") from None

        masses = np.unique(m)
        counts = np.unique(n)
        if len(rows) != masses.size * counts.size:
            raise SchemaError(
                f"{path}: {len(rows)} rows do not fill a complete "
                f"{masses.size} x {counts.size} grid")
        mi = np.searchsorted(masses, m)
        ni = np.searchsorted(counts, n)
        # Row count matches the grid size, so any unseen cell implies a
        # duplicate elsewhere: one check covers both failure modes.
        seen = np.zeros((masses.size, counts.size), dtype=bool)
        seen[mi, ni] = True
        if not seen.all():
            raise SchemaError(f"{path}: ragged grid (duplicate or missing cells)")

        def pivot(values, dtype=float):
            grid = np.empty((masses.size, counts.size), dtype=dtype)
            grid[mi, ni] = values
            return grid

        return cls(masses, counts, pivot(tau), pivot(gamma),
                   pivot(regime, dtype=object), pivot(flag, dtype=bool))


@dataclass(frozen=True)
class DecaySeries:
    """Density-matrix time series from the evolve CSV."""

    t: np.ndarray
    rho11: np.ndarray
    rho22: np.ndarray
    coherence: np.ndarray     # |rho12|

    @classmethod
    def from_csv(cls, path: str | Path) -> "DecaySeries":
        rows = _read_rows(path, DECAY_HEADER)
        if len(rows) < 2:
            raise SchemaError(f"{path}: need at least two time points")
        try:
            data = np.array([[float(v) for v in r] for r in rows])
        except ValueError as exc:
            raise SchemaError(f"{path}: malformed row ({exc})") from None
        if data.shape[1] != 5:
            raise SchemaError(f"{path}: expected 5 columns")
        t = data[:, 0]
        if np.any(np.diff(t) <= 0):
            raise SchemaError(f"{path}: time column must be strictly increasing")
        coherence = np.hypot(data[:, 3], data[:, 4])
        return cls(t, data[:, 1], data[:, 2], coherence)
