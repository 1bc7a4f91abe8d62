"""Decoherence-rate tests: kernels, closed form vs quadrature, scaling laws."""

import math

import pytest

from gravidec.decoherence import (
    NEGATIVE_RATE,
    PAPER_ELECTRON_I0V,
    RAW,
    RAW_KERNEL_UNITS,
    CalibrationError,
    PhysicalParams,
    SpatialKernel,
    calibrate_amplitude,
    gamma_closed_form_exponential,
    gamma_rate,
    kernel_value,
    paper_electron_params,
    rate_prefactor_hz,
    sinc_factor,
)
from gravidec.spectrum import ExponentialSpectrum, TabulatedSpectrum
from gravidec.units import CODATA, Constants

# Brackets frozen from 40-digit arithmetic (kernel minus sinc moment).
BRACKET_DX1_PC1 = 0.6324969025845954        # e^-1/8 - 1/4
BRACKET_DX10_PC1 = -9.4302951768613418e-05  # e^-12.5 - 101^-2
BRACKET_DX1E6 = 1.8749999999970078e-12      # dx = 1e-6 sigma0


def _params(dx_over_sigma=1.0, sigma0=1e-9, m_f=None, volume=1.0):
    return PhysicalParams(m_f or CODATA.m_e, sigma0, dx_over_sigma * sigma0, volume)


def test_kernel_normalized():
    k = SpatialKernel(1e-9)
    assert kernel_value(k, 0.0) == 1.0
    assert kernel_value(k, math.sqrt(8.0) * 1e-9) == pytest.approx(
        0.36787944117144233, rel=1e-14)


def test_kernel_raw_prefactor():
    k = SpatialKernel(1.0, RAW)
    assert kernel_value(k, 0.0) == pytest.approx(0.02244839026564582, rel=1e-14)
    assert k.compensation * kernel_value(k, 0.5) == pytest.approx(
        SpatialKernel(1.0).value(0.5), rel=1e-14)


def test_kernel_validation():
    with pytest.raises(ValueError):
        SpatialKernel(0.0)
    with pytest.raises(ValueError):
        SpatialKernel(1.0, "other")
    with pytest.raises(ValueError):
        SpatialKernel(1.0).value(-1.0)


def test_sinc_factor_limits():
    assert sinc_factor(0.0, 0.0) == 1.0
    assert sinc_factor(1.0, 0.0) == 1.0
    assert abs(sinc_factor(math.pi, 1.0)) < 1e-15
    assert sinc_factor(math.pi / 2, 1.0) == pytest.approx(2 / math.pi, rel=1e-14)


def test_sinc_series_agrees_with_direct_at_threshold():
    # the 4th-order series at the handover point matches sin(x)/x to rounding
    x = 1e-4
    series = 1.0 - x * x / 6.0 + x**4 / 120.0
    assert series == pytest.approx(math.sin(x) / x, abs=2.3e-16)  # one ulp


def test_gamma_zero_separation_exact():
    params = _params(0.0)
    spec = ExponentialSpectrum(1.0, 1e9)
    assert gamma_closed_form_exponential(params, 1.0, 1e9).gamma == 0.0
    assert gamma_rate(params, spec).gamma == 0.0


def test_gamma_bracket_at_dx_sigma():
    params = _params(1.0)
    res = gamma_closed_form_exponential(params, 1.0, 1e9)
    unit = rate_prefactor_hz(params) * 2.0 * (1e9) ** 3
    assert res.gamma / unit == pytest.approx(BRACKET_DX1_PC1, rel=1e-12)
    assert res.warnings == ()


def test_gamma_negative_at_large_separation():
    params = _params(10.0)
    res = gamma_closed_form_exponential(params, 1.0, 1e9)
    unit = rate_prefactor_hz(params) * 2.0 * (1e9) ** 3
    assert res.gamma / unit == pytest.approx(BRACKET_DX10_PC1, rel=1e-9)
    assert NEGATIVE_RATE in res.warnings


def test_gamma_tiny_separation_bracket():
    params = _params(1e-6)
    res = gamma_closed_form_exponential(params, 1.0, 1e9)
    unit = rate_prefactor_hz(params) * 2.0 * (1e9) ** 3
    assert res.gamma / unit == pytest.approx(BRACKET_DX1E6, rel=1e-9, abs=0)
    assert abs(res.gamma / unit) < 1e-10


@pytest.mark.parametrize("dx_ratio", [0.1, 1.0, 5.0])
@pytest.mark.parametrize("pc_sigma", [0.5, 2.0])
def test_closed_form_vs_quadrature(dx_ratio, pc_sigma):
    # amplitude at the physical calibration scale so rates are O(1e-2) Hz
    # and the comparison cannot hide under an absolute-tolerance floor
    sigma0 = 1e-9
    params = _params(dx_ratio, sigma0)
    spec = ExponentialSpectrum(3.7e57, pc_sigma / sigma0)
    closed = gamma_closed_form_exponential(params, spec.i0, spec.p_c)
    quad = gamma_rate(params, spec, rel_tol=1e-9)
    assert abs(quad.gamma - closed.gamma) <= 1e-6 * abs(closed.gamma)
    assert quad.method == "quadrature"
    assert closed.method == "closed-form"


def test_raw_mode_routes_agree_and_warn():
    sigma0 = 1e-9
    params = _params(1.0, sigma0)
    kernel = SpatialKernel(sigma0, RAW)
    spec = ExponentialSpectrum(1.0e57, 1.0 / sigma0)
    closed = gamma_closed_form_exponential(params, spec.i0, spec.p_c, kernel)
    quad = gamma_rate(params, spec, kernel, rel_tol=1e-9)
    assert RAW_KERNEL_UNITS in closed.warnings
    assert RAW_KERNEL_UNITS in quad.warnings
    assert abs(quad.gamma - closed.gamma) <= 1e-6 * abs(closed.gamma)


def test_kernel_width_mismatch_rejected():
    params = _params(1.0, sigma0=1e-9)
    with pytest.raises(ValueError, match="kernel width"):
        gamma_closed_form_exponential(params, 1.0, 1e9, SpatialKernel(2e-9))


def test_positive_rate_region():
    """Gamma > 0 for dx/sigma0 in (0, 5] at p_c = 1/sigma0 (normalized)."""
    sigma0 = 1e-9
    for ratio in (0.01, 0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0):
        res = gamma_closed_form_exponential(_params(ratio, sigma0), 1.0, 1.0 / sigma0)
        assert res.gamma > 0, f"rate not positive at dx = {ratio} sigma0"


def test_scaling_laws_exact():
    sigma0 = 1e-9
    params = _params(1.0, sigma0)
    base = gamma_closed_form_exponential(params, 1.0, 1e9).gamma

    doubled_g = Constants(G=2 * CODATA.G)
    assert gamma_closed_form_exponential(params, 1.0, 1e9, constants=doubled_g).gamma \
        / base == pytest.approx(2.0, rel=1e-12)

    heavier = PhysicalParams(2 * params.m_f, sigma0, params.dx, params.volume)
    assert gamma_closed_form_exponential(heavier, 1.0, 1e9).gamma / base \
        == pytest.approx(0.25, rel=1e-12)

    bigger = PhysicalParams(params.m_f, sigma0, params.dx, 2 * params.volume)
    assert gamma_closed_form_exponential(bigger, 1.0, 1e9).gamma / base \
        == pytest.approx(2.0, rel=1e-12)

    assert gamma_closed_form_exponential(params, 2.0, 1e9).gamma / base \
        == pytest.approx(2.0, rel=1e-12)


def test_calibrate_round_trip():
    sigma0 = 1e-9
    params = _params(1.0, sigma0)
    p_c = 1.0 / sigma0
    i0v = calibrate_amplitude(3.7e-3, params, p_c)
    res = gamma_closed_form_exponential(params, i0v / params.volume, p_c)
    assert res.gamma == pytest.approx(3.7e-3, rel=1e-12)
    assert calibrate_amplitude(7.4e-3, params, p_c) == pytest.approx(2 * i0v, rel=1e-12)


def test_calibrate_rejects_nonpositive_bracket():
    params = _params(10.0)
    with pytest.raises(CalibrationError):
        calibrate_amplitude(1e-2, params, 1e9)
    with pytest.raises(CalibrationError):
        calibrate_amplitude(-1.0, _params(1.0), 1e9)


def test_paper_electron_pinned_amplitude():
    params, spec, kernel = paper_electron_params()
    recomputed = calibrate_amplitude(1e-2, params, spec.p_c, kernel)
    assert recomputed == pytest.approx(PAPER_ELECTRON_I0V, rel=1e-12)
    assert gamma_closed_form_exponential(params, spec.i0, spec.p_c, kernel).gamma \
        == pytest.approx(1e-2, rel=1e-12)


def test_windowed_mode_small_window_matches_stationary():
    """A window much shorter than every graviton period is weight ~1."""
    sigma0 = 1e-9
    params = _params(1.0, sigma0)
    spec = ExponentialSpectrum(1.0e57, 1.0 / sigma0)
    stationary = gamma_rate(params, spec, rel_tol=1e-9)
    # support cut ~ 60/sigma0 inverse meters; tau0_nat << sigma0/60
    tau0_s = 1e-13 * sigma0 / CODATA.c
    windowed = gamma_rate(params, spec, rel_tol=1e-9, tau0=tau0_s)
    assert abs(windowed.gamma / stationary.gamma - 1.0) < 1e-6


def test_windowed_mode_suppresses_rate():
    """A window comparable to the graviton period reweights the spectrum."""
    sigma0 = 1e-9
    params = _params(1.0, sigma0)
    spec = ExponentialSpectrum(1.0e57, 1.0 / sigma0)
    stationary = gamma_rate(params, spec, rel_tol=1e-9)
    windowed = gamma_rate(params, spec, rel_tol=1e-9, tau0=sigma0 / CODATA.c)
    assert windowed.gamma / stationary.gamma < 0.5


def test_tabulated_spectrum_rate():
    """Rate through the tabulated route approximates its exponential source."""
    import numpy as np
    sigma0 = 1e-9
    p_c = 1.0 / sigma0
    grid = np.linspace(0.0, 40.0 * p_c, 4001)
    tab = TabulatedSpectrum(grid, 1.0e57 * np.exp(-grid / p_c))
    params = _params(1.0, sigma0)
    exact = gamma_closed_form_exponential(params, 1.0e57, p_c).gamma
    res = gamma_rate(params, tab, rel_tol=1e-9)
    # table truncation + linear interpolation dominate the deviation
    assert abs(res.gamma / exact - 1.0) < 1e-4


def test_params_validation():
    with pytest.raises(ValueError):
        PhysicalParams(0.0, 1e-9, 1e-9, 1.0)
    with pytest.raises(ValueError):
        PhysicalParams(CODATA.m_e, -1e-9, 1e-9, 1.0)
    with pytest.raises(ValueError):
        PhysicalParams(CODATA.m_e, 1e-9, -1e-9, 1.0)
    with pytest.raises(ValueError):
        PhysicalParams(CODATA.m_e, 1e-9, 1e-9, 0.0)
