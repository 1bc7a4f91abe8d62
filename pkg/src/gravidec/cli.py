"""Command-line surface wiring the toolkit together.

Subcommands: ``rate``, ``sweep``, ``evolve``, ``verify``, ``csl``,
``regimes``. Outputs are bit-stable: floats serialize as shortest
round-trip decimals, CSV uses comma separators and LF line endings with a
mandatory header, JSON keys are sorted. Identical config + seed produces
byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

import numpy as np

from . import config as cfgmod
from . import csl as cslmod
from .angular import verify_identities
from .config import ConfigError, RunConfig
from .csl import (
    IMPLEMENTED_DISSIPATOR,
    PRINTED_DISSIPATOR_SIGN,
    CSLLattice,
    StabilityError,
    lindblad_propagate,
    sde_ensemble,
    trace_distance,
)
from .decoherence import (
    PhysicalParams,
    SpatialKernel,
    gamma_closed_form_exponential,
    gamma_rate,
)
from .dynamics import (
    REGIME_CLASSICAL,
    REGIME_THRESHOLDS,
    SWEEP_CSV_HEADER,
    QubitState,
    classify_regime,
    evolve_populations,
    sweep_grid,
)
from .numerics import NonConvergenceError
from .spectrum import ExponentialSpectrum, TabulatedSpectrum
from .units import CODATA

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _fmt(value) -> str:
    """Shortest round-trip decimal for floats; 0/1 for booleans."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def _write_text(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def write_csv(header: str, rows, path: str) -> None:
    lines = [header]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    _write_text("\n".join(lines) + "\n", path)


def write_json(obj, path: str) -> None:
    _write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", path)


def _build_inputs(cfg: RunConfig):
    params = PhysicalParams(cfg.m_f_kg, cfg.sigma0_m, cfg.dx_m, cfg.volume_m3)
    if cfg.model == "exponential":
        spectrum = ExponentialSpectrum(cfg.i0, cfg.pc_inv_m)
    else:
        spectrum = TabulatedSpectrum.from_csv(cfg.csv_path)
    kernel = SpatialKernel(cfg.sigma0_m, cfg.mode)
    return params, spectrum, kernel


def _compute_rate(cfg: RunConfig):
    """Closed form whenever exact (exponential, stationary), else quadrature."""
    params, spectrum, kernel = _build_inputs(cfg)
    tau0 = cfg.tau0_s if cfg.tau0_s >= 0 else None
    if isinstance(spectrum, ExponentialSpectrum) and tau0 is None:
        return gamma_closed_form_exponential(params, spectrum.i0, spectrum.p_c, kernel)
    return gamma_rate(params, spectrum, kernel, rel_tol=cfg.rel_tol, tau0=tau0)


# -- subcommands ------------------------------------------------------------

def cmd_rate(cfg: RunConfig) -> int:
    result = _compute_rate(cfg)
    write_json({
        "gamma_hz": result.gamma,
        "abs_error": result.abs_error,
        "method": result.method,
        "warnings": list(result.warnings),
        "config_echo": cfgmod.echo(cfg),
    }, cfg.path)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, m_min: float, m_max: float, m_points: int,
              n_min: float, n_max: float, n_points: int) -> int:
    if m_min <= 0 or m_max < m_min or n_min < 1 or n_max < n_min:
        raise ConfigError("sweep grid bounds must satisfy 0 < m_min <= m_max "
                          "and 1 <= n_min <= n_max")
    if m_points < 1 or n_points < 1:
        raise ConfigError("sweep grids need at least one point per axis")
    masses = np.logspace(math.log10(m_min), math.log10(m_max), m_points)
    counts = np.logspace(math.log10(n_min), math.log10(n_max), n_points)
    params, spectrum, kernel = _build_inputs(cfg)
    rows = sweep_grid(masses, counts, params, spectrum, kernel,
                      horizon=cfg.horizon_s, rel_tol=cfg.rel_tol)
    write_csv(SWEEP_CSV_HEADER,
              ((r.m_kg, r.n, r.gamma_hz, r.tau_s, r.regime, r.on_physical_line)
               for r in rows),
              cfg.path)
    return EXIT_OK


EVOLVE_CSV_HEADER = "t_s,rho11,rho22,re_rho12,im_rho12"


def cmd_evolve(cfg: RunConfig, t_end: float, n_points: int,
               gamma_hz: float | None, rho11_0: float, re12_0: float,
               im12_0: float) -> int:
    if t_end < 0:
        raise ConfigError(f"t_end must be nonnegative, got {t_end}")
    if n_points < 2:
        raise ConfigError(f"need at least 2 time points, got {n_points}")
    gamma = gamma_hz if gamma_hz is not None else _compute_rate(cfg).gamma
    try:
        state0 = QubitState(rho11_0, 1.0 - rho11_0, complex(re12_0, im12_0))
    except ValueError as exc:
        raise ConfigError(f"invalid initial state: {exc}") from None
    rows = []
    for t in np.linspace(0.0, t_end, n_points):
        st = evolve_populations(state0, gamma, float(t))
        rows.append((float(t), st.rho11, st.rho22, st.rho12.real, st.rho12.imag))
    write_csv(EVOLVE_CSV_HEADER, rows, cfg.path)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    records = [r.as_dict() for r in verify_identities()]
    records.append({
        "name": "csl-lindblad-dissipator-sign",
        "computed": IMPLEMENTED_DISSIPATOR,
        "paper_value": PRINTED_DISSIPATOR_SIGN,
        "residual": "sign and factor 1/2 differ; CP form implemented",
        "status": "flagged",
    })
    write_json({"identities": records, "config_echo": cfgmod.echo(cfg)}, cfg.path)
    return EXIT_OK


def cmd_csl(cfg: RunConfig, preset_name: str, n_traj: int, t_end: float,
            dt: float, separation: float, mass: float | None,
            series_path: str | None, lam: float | None = None) -> int:
    if n_traj < 1:
        raise ConfigError(f"need at least one trajectory, got {n_traj}")
    params = cslmod.preset(preset_name)
    if lam is not None:
        if lam < 0:
            raise ConfigError(f"collapse rate must be nonnegative, got {lam}")
        params = replace(params, lam=lam)
    mass = mass if mass is not None else params.m0
    lattice = CSLLattice.two_site(separation, mass)
    psi0 = np.array([1.0, 1.0]) / np.sqrt(2.0)

    store_every = max(1, int(round(t_end / dt)) // 200)
    ensemble = sde_ensemble(lattice, params, psi0, t_end, dt,
                            seed=cfg.seed, n_traj=n_traj, store_every=store_every)
    mean_rho = ensemble.mean_density_matrices()
    lind = lindblad_propagate(lattice, params, np.outer(psi0, psi0.conj()),
                              ensemble.times)
    distances = [trace_distance(a, b) for a, b in zip(mean_rho, lind)]
    d_final = distances[-1]
    bound = 3.0 / math.sqrt(n_traj) + 2.0 * dt * params.lam * (mass / params.m0) ** 2 * t_end

    if series_path:
        rows = []
        for k, t in enumerate(ensemble.times):
            pops = [float(mean_rho[k][i, i].real) for i in range(lattice.dim)]
            rows.append((float(t), *pops, float(abs(mean_rho[k][0, 1]))))
        header = "t_s," + ",".join(f"pop_site{i+1}" for i in range(lattice.dim)) + ",coherence_abs"
        write_csv(header, rows, series_path)

    graviton = _compute_rate(cfg).gamma
    summary = {
        "preset": preset_name,
        "lambda_per_s": params.lam,
        "r_c_m": params.r_c,
        "m0_kg": params.m0,
        "mass_kg": mass,
        "separation_m": separation,
        "n_traj": n_traj,
        "t_end_s": t_end,
        "dt_s": dt,
        "seed": cfg.seed,
        "gamma_csl_analytic_hz": cslmod.coherence_decay_rate(params, mass, separation),
        "trace_distance_final": d_final,
        "trace_distance_bound": bound,
        "bound_satisfied": bool(d_final <= bound),
        "max_norm_drift": ensemble.max_norm_drift,
        "comparison": cslmod.compare_channels(graviton, params, lattice, separation),
        "config_echo": cfgmod.echo(cfg),
    }
    write_json(summary, cfg.path)
    return EXIT_OK


def cmd_regimes(cfg: RunConfig, gamma_hz: float | None) -> int:
    gamma = gamma_hz if gamma_hz is not None else _compute_rate(cfg).gamma
    gamma_cl = max(gamma, 0.0)
    tau = 1.0 / gamma_cl if gamma_cl > 0 else math.inf
    write_json({
        "thresholds": [
            {"tau_over_horizon_above": cutoff, "label": label}
            for cutoff, label in REGIME_THRESHOLDS
        ] + [{"tau_over_horizon_above": 0.0, "label": REGIME_CLASSICAL}],
        "horizon_s": cfg.horizon_s,
        "gamma_hz": gamma,
        "tau_s": tau,
        "regime": classify_regime(gamma_cl, cfg.horizon_s),
        "config_echo": cfgmod.echo(cfg),
    }, cfg.path)
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="config file path")
    parser.add_argument("--out", help="output path ('-' for stdout)")
    parser.add_argument("--format", choices=["csv", "json"])
    parser.add_argument("--rel-tol", type=float, dest="rel_tol")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--preset", choices=["paper-electron"],
                        help="parameter preset (paper-electron pins Gamma = 1e-2 Hz)")
    parser.add_argument("--mf", type=float, help="fermion mass, kg")
    parser.add_argument("--sigma0", type=float, help="wavepacket width, m")
    parser.add_argument("--dx", type=float, help="branch separation, m")
    parser.add_argument("--volume", type=float, help="normalization volume, m^3")
    parser.add_argument("--i0", type=float, help="spectral amplitude")
    parser.add_argument("--pc", type=float, help="momentum cutoff, 1/m")
    parser.add_argument("--pc-sigma", type=float, dest="pc_sigma",
                        help="dimensionless p_c * sigma0 (overrides --pc)")
    parser.add_argument("--kernel", choices=["normalized", "raw"])
    parser.add_argument("--tau0", type=float, help="finite interaction window, s")
    parser.add_argument("--horizon", type=float, help="observation horizon, s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gravidec",
        description="Graviton-bremsstrahlung decoherence toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="decoherence rate for one configuration")
    _add_common(p)

    p = sub.add_parser("sweep", help="mass / constituent-number classicality table")
    _add_common(p)
    p.add_argument("--m-min", type=float, default=1e-31)
    p.add_argument("--m-max", type=float, default=1e-6)
    p.add_argument("--m-points", type=int, default=26)
    p.add_argument("--n-min", type=float, default=1.0)
    p.add_argument("--n-max", type=float, default=1e18)
    p.add_argument("--n-points", type=int, default=19)

    p = sub.add_parser("evolve", help="density-matrix time series")
    _add_common(p)
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--n-points", type=int, default=101)
    p.add_argument("--gamma-hz", type=float, help="override the computed rate")
    p.add_argument("--rho11", type=float, default=0.5)
    p.add_argument("--re12", type=float, default=0.5)
    p.add_argument("--im12", type=float, default=0.0)

    p = sub.add_parser("verify", help="audit the angular-identity chain")
    _add_common(p)

    p = sub.add_parser("csl", help="CSL unraveling ensemble vs Lindblad")
    _add_common(p)
    p.add_argument("--csl-preset", default="grw",
                   choices=["grw", "adler_a", "adler_b"])
    p.add_argument("--lam", type=float,
                   help="override the preset collapse rate, 1/s")
    p.add_argument("--n-traj", type=int, default=200)
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-2)
    p.add_argument("--d", type=float, default=2e-7, help="branch separation, m")
    p.add_argument("--mass", type=float, help="site mass, kg (default: m0)")
    p.add_argument("--series-out", help="also write the ensemble-mean CSV here")

    p = sub.add_parser("regimes", help="regime thresholds and classification")
    _add_common(p)
    p.add_argument("--gamma-hz", type=float, help="classify this rate directly")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides: dict = {}
    if args.preset == "paper-electron":
        overrides.update(
            m_f_kg=CODATA.m_e,
            sigma0_m=1e-9,
            dx_m=1e-9,
            volume_m3=1.0,
            model="exponential",
            i0=cfgmod.RunConfig().i0,
            pc_inv_m=1e9,
        )
    flag_map = {
        "mf": "m_f_kg", "sigma0": "sigma0_m", "dx": "dx_m",
        "volume": "volume_m3", "i0": "i0", "pc": "pc_inv_m",
        "kernel": "mode", "rel_tol": "rel_tol", "seed": "seed",
        "threads": "threads", "out": "path", "format": "format",
        "tau0": "tau0_s", "horizon": "horizon_s",
    }
    for flag, attr in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[attr] = value
    cfg = cfgmod.resolve(args.config, **overrides)
    if getattr(args, "pc_sigma", None) is not None:
        if args.pc_sigma <= 0:
            raise ConfigError(f"--pc-sigma must be positive, got {args.pc_sigma}")
        cfg = replace(cfg, pc_inv_m=args.pc_sigma / cfg.sigma0_m)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if args.command == "rate":
            return cmd_rate(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.m_min, args.m_max, args.m_points,
                             args.n_min, args.n_max, args.n_points)
        if args.command == "evolve":
            return cmd_evolve(cfg, args.t_end, args.n_points, args.gamma_hz,
                              args.rho11, args.re12, args.im12)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "csl":
            return cmd_csl(cfg, args.csl_preset, args.n_traj, args.t_end,
                           args.dt, args.d, args.mass, args.series_out,
                           args.lam)
        if args.command == "regimes":
            return cmd_regimes(cfg, args.gamma_hz)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonConvergenceError, StabilityError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
