"""Physical constants and the internal natural-unit system.

Every module in this package computes in natural units (hbar = c = 1),
with all quantities reduced to a power of meters: lengths stay in meters,
masses / momenta / energies / rates become inverse meters. SI values only
appear at the API boundary. The :class:`Quantity` type tags a value with
its dimension and unit system so that mixing them up is an error rather
than a silent factor-of-c bug.

Constants are CODATA 2018 and frozen at import time. The only sanctioned
way to run with different constants is to construct an explicit
:class:`Constants` instance and pass it down to the rate functions; that
hook exists for scaling-law tests, not for configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class DimensionError(ValueError):
    """Arithmetic between incompatible dimensions, or an unsupported result."""


class Dimension(Enum):
    """Dimension tags, stored as (meter, kilogram, second) exponents."""

    DIMENSIONLESS = (0, 0, 0)
    LENGTH = (1, 0, 0)
    MASS = (0, 1, 0)
    TIME = (0, 0, 1)
    MOMENTUM = (1, 1, -1)
    ENERGY = (2, 1, -2)
    RATE = (0, 0, -1)
    VOLUME = (3, 0, 0)
    INVERSE_VOLUME = (-3, 0, 0)
    # 16*pi*G and G itself live here: m^3 kg^-1 s^-2.
    GRAVITATIONAL_COUPLING = (3, -1, -2)

    @property
    def exponents(self) -> tuple[int, int, int]:
        return self.value

    @property
    def natural_length_power(self) -> int:
        """Power of meters this dimension carries once hbar = c = 1."""
        a, b, g = self.value
        return a - b + g


_BY_EXPONENTS = {d.value: d for d in Dimension}


def _compose(d1: Dimension, d2: Dimension, sign: int) -> Dimension:
    exps = tuple(x + sign * y for x, y in zip(d1.value, d2.value))
    try:
        return _BY_EXPONENTS[exps]
    except KeyError:
        op = "*" if sign > 0 else "/"
        raise DimensionError(
            f"{d1.name} {op} {d2.name} has no supported dimension "
            f"(meter/kg/second exponents {exps})"
        ) from None


SI = "si"
NATURAL = "natural"


@dataclass(frozen=True)
class Quantity:
    """A value tagged with a dimension and a unit system.

    Addition and subtraction require matching dimension and system;
    multiplication and division resolve to a supported dimension or raise
    :class:`DimensionError`. No coercion ever happens silently.
    """

    value: float
    dimension: Dimension
    system: str = SI

    def __post_init__(self):
        if self.system not in (SI, NATURAL):
            raise ValueError(f"unknown unit system {self.system!r}")

    def _check_same(self, other: "Quantity") -> None:
        if self.dimension is not other.dimension:
            raise DimensionError(
                f"cannot combine {self.dimension.name} with {other.dimension.name}"
            )
        if self.system != other.system:
            raise DimensionError(
                f"cannot combine {self.system} with {other.system} quantities"
            )

    def __add__(self, other: "Quantity") -> "Quantity":
        self._check_same(other)
        return Quantity(self.value + other.value, self.dimension, self.system)

    def __sub__(self, other: "Quantity") -> "Quantity":
        self._check_same(other)
        return Quantity(self.value - other.value, self.dimension, self.system)

    def __mul__(self, other):
        if isinstance(other, Quantity):
            if self.system != other.system:
                raise DimensionError(
                    f"cannot combine {self.system} with {other.system} quantities"
                )
            dim = _compose(self.dimension, other.dimension, +1)
            return Quantity(self.value * other.value, dim, self.system)
        return Quantity(self.value * other, self.dimension, self.system)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Quantity):
            if self.system != other.system:
                raise DimensionError(
                    f"cannot combine {self.system} with {other.system} quantities"
                )
            dim = _compose(self.dimension, other.dimension, -1)
            return Quantity(self.value / other.value, dim, self.system)
        return Quantity(self.value / other, self.dimension, self.system)


@dataclass(frozen=True)
class Constants:
    """CODATA 2018 constants (SI). Immutable; construct only in tests."""

    G: float = 6.67430e-11          # m^3 kg^-1 s^-2
    hbar: float = 1.054571817e-34   # J s
    c: float = 299792458.0          # m / s
    m_e: float = 9.1093837015e-31   # kg
    m_N: float = 1.67262192369e-27  # kg (proton mass; the CSL nucleon m0)

    @property
    def kappa2_si(self) -> float:
        """Gravitational coupling 16*pi*G, never stored independently."""
        return 16.0 * math.pi * self.G

    @property
    def planck_length_sq(self) -> float:
        """l_P^2 = hbar G / c^3, the natural-unit image of G."""
        return self.hbar * self.G / self.c**3

    @property
    def kappa2_natural(self) -> float:
        """16*pi*G with hbar = c = 1, in m^2."""
        return 16.0 * math.pi * self.planck_length_sq

    def kappa_squared(self, system: str = SI) -> Quantity:
        if system == SI:
            return Quantity(self.kappa2_si, Dimension.GRAVITATIONAL_COUPLING, SI)
        if system == NATURAL:
            return Quantity(self.kappa2_natural, Dimension.GRAVITATIONAL_COUPLING, NATURAL)
        raise ValueError(f"unknown unit system {system!r}")

    # -- conversion machinery ------------------------------------------------

    def _natural_factor(self, dimension: Dimension) -> float:
        # For SI exponents (a, b, g) the factor hbar^-b c^(b+g) maps the value
        # onto meters^(a - b + g).
        _, b, g = dimension.exponents
        return self.hbar ** (-b) * self.c ** (b + g)

    def to_natural(self, q: Quantity) -> Quantity:
        """Convert an SI quantity to natural units (powers of meters)."""
        if q.system == NATURAL:
            return q
        return Quantity(q.value * self._natural_factor(q.dimension), q.dimension, NATURAL)

    def to_si(self, q: Quantity) -> Quantity:
        """Inverse of :meth:`to_natural`; exact round trip up to rounding."""
        if q.system == SI:
            return q
        return Quantity(q.value / self._natural_factor(q.dimension), q.dimension, SI)

    # Scalar shorthands used throughout the rate pipeline.

    def mass_to_inverse_m(self, mass_kg: float) -> float:
        return mass_kg * self.c / self.hbar

    def rate_to_hz(self, rate_inverse_m: float) -> float:
        return rate_inverse_m * self.c


#: Shared frozen constants instance; the default for every rate function.
CODATA = Constants()


def to_natural(q: Quantity, constants: Constants = CODATA) -> Quantity:
    return constants.to_natural(q)


def to_si(q: Quantity, constants: Constants = CODATA) -> Quantity:
    return constants.to_si(q)


def kappa_squared(system: str = SI, constants: Constants = CODATA) -> Quantity:
    return constants.kappa_squared(system)
