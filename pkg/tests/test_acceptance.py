"""Acceptance suite: one test per exit criterion, at its stated tolerance.

Each test prints a single ``ACCEPTANCE <name>: PASS`` line on success (run
pytest with ``-s`` to see them); a failure reads as the criterion name. The
tolerances here are contractual, not calibration knobs.
"""

import json
import math
import time

import numpy as np
import pytest

from gravidec.angular import (
    HALF,
    PLUS_CROSS,
    UNNORMALIZED,
    PolarizationBasis,
    f_kernel_average,
    tt_average_paper_formula,
    tt_projector_average,
)
from gravidec.cli import main
from gravidec.csl import (
    CSLLattice,
    CSLParams,
    coherence_decay_rate,
    lindblad_propagate,
    presets,
    sde_ensemble,
    trace_distance,
)
from gravidec.decoherence import (
    PAPER_ELECTRON_I0V,
    PhysicalParams,
    SpatialKernel,
    calibrate_amplitude,
    gamma_closed_form_exponential,
    gamma_rate,
    paper_electron_params,
    rate_prefactor_hz,
)
from gravidec.dynamics import (
    AmplifiedSystem,
    QubitState,
    amplified_rate,
    evolve_coherence,
    evolve_populations,
    evolve_populations_rk4,
    single_particle_rate,
)
from gravidec.numerics import SphericalGrid, integrate_sphere
from gravidec.spectrum import ExponentialSpectrum
from gravidec.units import CODATA, Constants


class Stopwatch:
    def __init__(self, budget_s: float):
        self.budget = budget_s
        self.t0 = time.perf_counter()

    def check(self, name: str):
        elapsed = time.perf_counter() - self.t0
        assert elapsed < self.budget, (
            f"{name}: runtime {elapsed:.2f}s exceeded budget {self.budget}s")


def _passed(name: str):
    print(f"ACCEPTANCE {name}: PASS")


def test_short_distance_limit():
    """Gamma(0) = 0 exactly; |Gamma(1e-6 sigma0)| < 1e-10 * C; < 1 s."""
    watch = Stopwatch(1.0)
    sigma0 = 1e-9
    p_c = 1.0 / sigma0
    spec = ExponentialSpectrum(PAPER_ELECTRON_I0V, p_c)

    at_zero = PhysicalParams(CODATA.m_e, sigma0, 0.0, 1.0)
    assert gamma_closed_form_exponential(at_zero, spec.i0, spec.p_c).gamma == 0.0
    assert gamma_rate(at_zero, spec).gamma == 0.0

    tiny = PhysicalParams(CODATA.m_e, sigma0, 1e-6 * sigma0, 1.0)
    # C = kappa^2 V I0 p_c^3 / (16 pi^2 m_f^2), the bracket-free unit rate
    c_unit = rate_prefactor_hz(tiny) * spec.i0 * 2.0 * p_c**3
    res = gamma_closed_form_exponential(tiny, spec.i0, spec.p_c)
    assert abs(res.gamma) < 1e-10 * c_unit
    res_q = gamma_rate(tiny, spec)
    assert abs(res_q.gamma) < 1e-10 * c_unit
    watch.check("short-distance-limit")
    _passed("short-distance-limit")


def test_closed_form_oracle_grid():
    """Closed form vs adaptive quadrature: rel 1e-6 on the 18-point grid; < 10 s."""
    watch = Stopwatch(10.0)
    sigma0 = 1e-9
    worst = 0.0
    for dx_ratio in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
        for pc_sigma in (0.5, 1.0, 2.0):
            params = PhysicalParams(CODATA.m_e, sigma0, dx_ratio * sigma0, 1.0)
            spec = ExponentialSpectrum(PAPER_ELECTRON_I0V, pc_sigma / sigma0)
            closed = gamma_closed_form_exponential(params, spec.i0, spec.p_c)
            quad = gamma_rate(params, spec, rel_tol=1e-9)
            rel = abs(quad.gamma - closed.gamma) / abs(closed.gamma)
            worst = max(worst, rel)
            assert rel <= 1e-6, (
                f"dx={dx_ratio} sigma0, p_c sigma0={pc_sigma}: rel {rel:.3e}")
    watch.check("closed-form-oracle")
    _passed(f"closed-form-oracle (worst rel {worst:.2e})")


def test_scaling_law_exactness():
    """Gamma ~ kappa^2, V, I0, 1/m_f^2; Gamma_N = N^2 Gamma_1; ratios to 1e-12."""
    sigma0 = 1e-9
    params = PhysicalParams(CODATA.m_e, sigma0, sigma0, 1.0)
    base = gamma_closed_form_exponential(params, PAPER_ELECTRON_I0V, 1e9).gamma

    ratio = gamma_closed_form_exponential(
        params, PAPER_ELECTRON_I0V, 1e9,
        constants=Constants(G=2 * CODATA.G)).gamma / base
    assert abs(ratio - 2.0) <= 1e-12

    doubled_v = PhysicalParams(params.m_f, sigma0, params.dx, 2.0)
    assert abs(gamma_closed_form_exponential(
        doubled_v, PAPER_ELECTRON_I0V, 1e9).gamma / base - 2.0) <= 1e-12

    assert abs(gamma_closed_form_exponential(
        params, 2 * PAPER_ELECTRON_I0V, 1e9).gamma / base - 2.0) <= 1e-12

    doubled_m = PhysicalParams(2 * params.m_f, sigma0, params.dx, 1.0)
    assert abs(gamma_closed_form_exponential(
        doubled_m, PAPER_ELECTRON_I0V, 1e9).gamma / base - 0.25) <= 1e-12

    for n in (2, 10, 1024):
        amp = amplified_rate(AmplifiedSystem.from_constituents(n, CODATA.m_N), base)
        assert abs(amp.gamma_n / base - n * n) <= 1e-12 * n * n
    _passed("scaling-law-exactness")


def test_paper_magnitude_chain():
    """Electron 1e-2 Hz pinned; molecule and virus magnitudes; < 1 s."""
    watch = Stopwatch(1.0)
    params, spec, kernel = paper_electron_params()
    electron = gamma_closed_form_exponential(params, spec.i0, spec.p_c, kernel)
    assert abs(electron.gamma - 1e-2) <= 1e-12
    recal = calibrate_amplitude(1e-2, params, spec.p_c, kernel)
    assert abs(recal / PAPER_ELECTRON_I0V - 1.0) <= 1e-12

    gamma_nucleon = single_particle_rate(CODATA.m_N, params, spec, kernel)
    gamma_mol = amplified_rate(
        AmplifiedSystem.from_constituents(1e2, CODATA.m_N), gamma_nucleon).gamma_n
    assert 1e-5 <= gamma_mol <= 1e-4, f"Gamma_mol = {gamma_mol}"

    gamma_virus = amplified_rate(
        AmplifiedSystem.from_constituents(1e6, CODATA.m_N), gamma_nucleon).gamma_n
    assert 3e2 <= gamma_virus <= 3e4, f"Gamma_virus = {gamma_virus}"
    watch.check("paper-magnitude-chain")
    _passed(f"paper-magnitude-chain (mol {gamma_mol:.2e} Hz, virus {gamma_virus:.0f} Hz)")


def test_master_equation_suite():
    """Coherence, populations, step integrator, fixed point, trace/positivity."""
    gamma = 0.7
    rho12_0 = 0.3 - 0.2j
    state0 = QubitState(0.8, 0.2, rho12_0)

    for t in np.linspace(0.0, 12.0, 25):
        exact = rho12_0 * np.exp(-gamma * t)
        assert abs(evolve_coherence(rho12_0, gamma, float(t)) - exact) <= 1e-10

    for t in (1.0, 5.0, 10.0 / gamma):
        n_steps = max(10, int(round(gamma * t / 1e-3)))
        numeric, _ = evolve_populations_rk4(state0, gamma, t, n_steps)
        exact = evolve_populations(state0, gamma, t)
        assert abs(numeric.rho11 - exact.rho11) <= 1e-9
        assert abs(numeric.rho12 - exact.rho12) <= 1e-9

    w0 = state0.population_gap
    for t in np.linspace(0.0, 8.0, 17):
        st = evolve_populations(state0, gamma, float(t))
        assert abs(st.population_gap - w0 * math.exp(-2 * gamma * t)) <= 1e-12
        assert abs(st.rho11 + st.rho22 - 1.0) <= 1e-12
        assert abs(st.rho12) ** 2 <= st.rho11 * st.rho22 + 1e-12

    late = evolve_populations(QubitState(1.0, 0.0, 0.0), gamma, 40.0 / gamma)
    assert abs(late.rho11 - 0.5) <= 1e-8
    assert abs(late.rho22 - 0.5) <= 1e-8
    assert abs(late.rho12) <= 1e-8
    _passed("master-equation-suite")


def test_angular_audit():
    """Sphere identities at stated tolerances; 4 pi claim flagged; < 5 s."""
    watch = Stopwatch(5.0)
    grid = SphericalGrid.build(64, 64)
    for pdx in (0.1, 1.0, math.pi, 10.0):
        res = integrate_sphere(lambda th, ph: np.exp(-1j * pdx * np.cos(th)), grid)
        target = 4 * math.pi * np.sinc(pdx / math.pi)
        assert abs(res.value.real - target) <= 1e-10 * max(abs(target), 1.0)

    avg = tt_projector_average(UNNORMALIZED)
    assert np.abs(avg - tt_average_paper_formula()).max() <= 1e-8

    f_avg = f_kernel_average()
    assert abs(f_avg.quadrature - 10 * math.pi / 3) <= 1e-10
    assert f_avg.discrepancy > 0.16  # flagged against the quoted 4 pi

    rng = np.random.default_rng(20240601)
    for _ in range(1000):
        theta = math.acos(rng.uniform(-1, 1))
        phi = rng.uniform(0, 2 * math.pi)
        basis = PolarizationBasis(theta, phi, PLUS_CROSS)
        hs = basis.tensors()
        n = basis.direction
        for h in hs:
            assert np.abs(h @ n).max() <= 1e-14
            assert abs(np.trace(h)) <= 1e-14
        for a in range(2):
            for b in range(2):
                overlap = np.sum(hs[a] * hs[b])
                assert abs(overlap - (1.0 if a == b else 0.0)) <= 1e-14
    watch.check("angular-audit")
    _passed("angular-audit")


def test_csl_suite():
    """Two-site rate 1%; SDE ensemble within 0.02; N^2 within 1%; presets; < 2 min."""
    watch = Stopwatch(120.0)
    p = CSLParams(lam=2.0, r_c=1.0, m0=1.0)
    lat = CSLLattice.two_site(3.0, 1.0)
    rho0 = np.full((2, 2), 0.5, dtype=complex)

    t_fit = 0.5
    rho_t = lindblad_propagate(lat, p, rho0, np.array([t_fit]))[0]
    fitted = -math.log(abs(rho_t[0, 1]) / 0.5) / t_fit
    analytic = coherence_decay_rate(p, 1.0, 3.0)
    assert abs(fitted - analytic) / analytic <= 0.01

    psi0 = np.array([1.0, 1.0]) / math.sqrt(2)
    ens = sde_ensemble(lat, p, psi0, t_end=0.3, dt=2.5e-5, seed=20240601,
                       n_traj=10_000, store_every=3000)
    mean = ens.mean_density_matrices()
    lind = lindblad_propagate(lat, p, rho0, ens.times)
    worst = max(trace_distance(a, b) for a, b in zip(mean, lind))
    assert worst <= 0.02, f"ensemble trace distance {worst:.4f}"

    rates = {}
    for n in (1, 2, 4, 8):
        cluster = CSLLattice.two_site(25.0, float(n))
        t = 0.05 / n**2
        rho_n = lindblad_propagate(cluster, p, rho0, np.array([t]))[0]
        rates[n] = -math.log(abs(rho_n[0, 1]) / 0.5) / t
    for n in (2, 4, 8):
        assert abs(rates[n] / rates[1] - n**2) <= 0.01 * n**2

    table = presets()
    assert table["grw"].lam == 1e-16 and table["grw"].r_c == 1e-7
    assert table["adler_a"].lam == 4e-8 and table["adler_a"].r_c == 1e-7
    assert table["adler_b"].lam == 1e-6 and table["adler_b"].r_c == 1e-6
    watch.check("csl-suite")
    _passed(f"csl-suite (SDE trace distance {worst:.4f})")


def test_output_determinism(tmp_path):
    """sweep and csl outputs byte-identical across reruns with same config."""
    sweep_out = tmp_path / "sweep.csv"
    args = ["sweep", "--m-points", "6", "--n-points", "5", "--seed", "7",
            "--out", str(sweep_out)]
    assert main(args) == 0
    first = sweep_out.read_bytes()
    assert main(args) == 0
    assert sweep_out.read_bytes() == first

    csl_out = tmp_path / "csl.json"
    series_out = tmp_path / "series.csv"
    args = ["csl", "--csl-preset", "adler_a", "--n-traj", "32", "--t-end", "0.1",
            "--dt", "5e-3", "--seed", "11", "--series-out", str(series_out),
            "--out", str(csl_out)]
    assert main(args) == 0
    first_json = csl_out.read_bytes()
    first_series = series_out.read_bytes()
    assert main(args) == 0
    assert csl_out.read_bytes() == first_json
    assert series_out.read_bytes() == first_series
    payload = json.loads(first_json)
    assert payload["lambda_per_s"] == 4e-8
    _passed("output-determinism")
