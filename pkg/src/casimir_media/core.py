"""Unit conventions and the validated value types shared by all modules.

Everything inside the library works in natural units, hbar = c = k_B = 1, measured
against a reference frequency omega_ref chosen by the caller:

    frequencies, energies, temperatures   in units of omega_ref (hbar*omega_ref)
    lengths                               in units of c/omega_ref
    squared dipole moments d2             in units of hbar*c*(c/omega_ref)**2
    number densities                      in units of (omega_ref/c)**3

so an interaction energy U comes out in units of hbar*omega_ref. Formulas printed with
explicit hbar and c (the slab force, for example) carry them as 1.

All types are frozen dataclasses; once constructed they are valid and immutable.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

from scipy import constants

from .errors import DomainError


def _finite(name: str, value: float) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {v}")
    return v


def require_positive(name: str, value: float) -> float:
    v = _finite(name, value)
    if v <= 0.0:
        raise DomainError(f"{name} must be > 0, got {v}")
    return v


def require_nonnegative(name: str, value: float) -> float:
    v = _finite(name, value)
    if v < 0.0:
        raise DomainError(f"{name} must be >= 0, got {v}")
    return v


@dataclass(frozen=True)
class UnitSystem:
    """Natural units anchored to a reference angular frequency.

    Inside the library the unit system is only a marker: every number is already in
    units of omega_ref. The conversion helpers are for presenting results in SI.

    Args:
        omega_ref: reference angular frequency in rad/s. Defaults to 1.0, in which case the
            helpers simply report the SI value for omega_ref = 1 rad/s.
    """

    omega_ref: float = 1.0

    def __post_init__(self):
        require_positive("omega_ref", self.omega_ref)

    def energy_joule(self, u: float) -> float:
        return u * constants.hbar * self.omega_ref

    def length_meter(self, x: float) -> float:
        return x * constants.c / self.omega_ref

    def temperature_kelvin(self, t: float) -> float:
        return t * constants.hbar * self.omega_ref / constants.k

    def force_per_area_pascal(self, f: float) -> float:
        return f * constants.hbar * self.omega_ref / (constants.c / self.omega_ref) ** 3

    def dipole_sq_si(self, d2: float) -> float:
        """|d|^2 in C^2 m^2 (SI dipole moment squared)."""
        length = constants.c / self.omega_ref
        return (
            d2 * constants.hbar * constants.c * length**2 * 4.0 * math.pi * constants.epsilon_0
        )

    def describe(self) -> str:
        return f"natural units hbar=c=k_B=1, omega_ref={self.omega_ref!r} rad/s"


NATURAL_UNITS = UnitSystem()


@dataclass(frozen=True)
class AtomSpecies:
    """One two-level species.

    Args:
        omega: transition frequency, > 0.
        d2: squared dipole matrix element |d_eg|^2, >= 0.
        gamma: linewidth, >= 0.
    """

    omega: float
    d2: float
    gamma: float = 0.0

    def __post_init__(self):
        # normalise ints and numpy scalars to float
        object.__setattr__(self, "omega", require_positive("omega", self.omega))
        object.__setattr__(self, "d2", require_nonnegative("d2", self.d2))
        object.__setattr__(self, "gamma", require_nonnegative("gamma", self.gamma))

    @property
    def static_polarizability(self) -> float:
        return static_polarizability(self)


@dataclass(frozen=True)
class Medium:
    """A dilute gas of one species with number density ``density``."""

    species: AtomSpecies
    density: float

    def __post_init__(self):
        if not isinstance(self.species, AtomSpecies):
            raise DomainError(f"species must be an AtomSpecies, got {self.species!r}")
        object.__setattr__(self, "density", require_positive("density", self.density))

    @property
    def photon_mean_free_path(self) -> float:
        """L_ph = 3*gamma / (8*pi*omega*d2*n), c = 1.

        Infinite for a transparent gas (d2 = 0) and zero for a gas with gamma = 0.
        """
        s = self.species
        rate_numerator = 8.0 * math.pi * s.omega * s.d2 * self.density
        if rate_numerator == 0.0:
            return math.inf
        return 3.0 * s.gamma / rate_numerator


class Excitation(Enum):
    NONE = "none"
    ATOM_A = "A"


@dataclass(frozen=True)
class PairState:
    """Which atom of a pair is excited. Resonant terms vanish for ``Excitation.NONE``."""

    excited: Excitation = Excitation.ATOM_A

    def __post_init__(self):
        object.__setattr__(self, "excited", Excitation(self.excited))

    @property
    def resonant_active(self) -> bool:
        return self.excited is Excitation.ATOM_A


GROUND = PairState(Excitation.NONE)
EXCITED_A = PairState(Excitation.ATOM_A)


def make_species(omega: float, d2: float, gamma: float = 0.0) -> AtomSpecies:
    """Validated construction of an AtomSpecies.

    Raises:
        DomainError: omega <= 0, d2 < 0, gamma < 0, or any non-finite input.
    """
    return AtomSpecies(omega=omega, d2=d2, gamma=gamma)


def make_medium(species: AtomSpecies, density: float) -> Medium:
    return Medium(species=species, density=density)


def static_polarizability(species: AtomSpecies) -> float:
    """alpha(0) = (2/3) d2 / omega."""
    return 2.0 * species.d2 / (3.0 * species.omega)


def scale_species(species: AtomSpecies, s: float) -> AtomSpecies:
    """The same physical species expressed with omega_ref divided by ``s``.

    Frequencies scale by s and d2 (a length squared) by 1/s**2; distances then scale by
    1/s and energies by s.
    """
    s = require_positive("s", s)
    return replace(
        species, omega=species.omega * s, d2=species.d2 / s**2, gamma=species.gamma * s
    )


def scale_medium(medium: Medium, s: float) -> Medium:
    return Medium(species=scale_species(medium.species, s), density=medium.density * s**3)
