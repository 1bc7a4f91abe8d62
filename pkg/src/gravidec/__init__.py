"""Graviton-bremsstrahlung decoherence toolkit.

Computes the decoherence rate of spatial superpositions from graviton
emission, evolves the resulting qubit master equation, sweeps the
mass / constituent-number classicality plane, numerically audits the
angular-integration identities behind the rate, and cross-compares against
the CSL collapse model (Lindblad form and stochastic unraveling).
"""

from .angular import (
    PAPER_LINEAR,
    PLUS_CROSS,
    HALF,
    UNNORMALIZED,
    PolarizationBasis,
    f_kernel,
    f_kernel_average,
    polarization_sum,
    tt_projector,
    tt_projector_average,
    verify_identities,
)
from .csl import (
    CSLLattice,
    CSLParams,
    StabilityError,
    coherence_decay_rate,
    compare_channels,
    correlator_matrix,
    lindblad_propagate,
    lindblad_rhs,
    presets,
    sde_ensemble,
    sde_trajectory,
    trace_distance,
)
from .decoherence import (
    PAPER_ELECTRON_I0V,
    CalibrationError,
    PhysicalParams,
    RateResult,
    SpatialKernel,
    calibrate_amplitude,
    gamma_closed_form_exponential,
    gamma_rate,
    kernel_value,
    paper_electron_params,
    sinc_factor,
)
from .dynamics import (
    AmplifiedRate,
    AmplifiedSystem,
    QubitState,
    amplified_rate,
    classify_regime,
    evolve_coherence,
    evolve_populations,
    evolve_populations_rk4,
    sweep_grid,
)
from .numerics import (
    NonConvergenceError,
    QuadratureResult,
    SphericalGrid,
    integrate_semi_infinite,
    integrate_sphere,
)
from .spectrum import (
    ExponentialSpectrum,
    GravitonSpectrum,
    TabulatedSpectrum,
    graviton_number,
    second_moment,
    time_filter,
)
from .units import CODATA, Constants, Dimension, DimensionError, Quantity

__version__ = "0.1.0"
