"""Pair potentials integrated over dilute gas media.

Three geometries:

* an excited atom at distance z0 from a half-space of gas. Integrating the undamped
  far-zone resonant potential (~R^-2) over the half-space diverges; ``divergence_probe``
  evaluates the cut-off integral to show how. With photon absorption the damped term
  converges, see ``u_atom_halfspace_regularized``.
* two gas slabs facing each other across a gap L, each of effective thickness L_ph (the
  photon mean free path). ``slab_force`` returns the Lifshitz force plus the resonant
  correction of thermally excited atoms.
* the high-temperature dilute-gas Lifshitz force on its own, ``lifshitz_force``.

Forces are per unit area of the slabs, positive meaning attraction.

The slab correction uses the damping (gamma_B omega_A)^2 while the pair term uses
(gamma_B/2)^2; each formula keeps its own form.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import expn

from .core import EXCITED_A, AtomSpecies, Medium, PairState, require_positive
from .errors import DegeneracyError, DomainError, PoleError
from .integrate import adaptive_quad
from .pair_thermal import (
    AbsorptionModel,
    ThermalContext,
    coth_half,
    photon_lifetime,
    resonant_coefficient,
)

logger = logging.getLogger(__name__)

HALFSPACE_REL_TOL = 1e-10
POLE_DISTANCE = 1e-6
SIGN_CONVENTION = "positive = attraction"


class LifshitzVariant(Enum):
    AS_PRINTED_TAN = "tan"
    TANH_VARIANT = "tanh"


@dataclass(frozen=True)
class HalfSpaceGeometry:
    z0: float
    medium: Medium

    def __post_init__(self):
        object.__setattr__(self, "z0", require_positive("z0", self.z0))


@dataclass(frozen=True)
class SlabPairGeometry:
    """Two gas slabs across a gap L.

    The interacting thickness of each slab defaults to the photon mean free path of its
    own medium; ``l_ph_a`` / ``l_ph_b`` override it per side.
    """

    L: float
    medium_a: Medium
    medium_b: Medium
    l_ph_a: Optional[float] = None
    l_ph_b: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "L", require_positive("L", self.L))
        for name in ("l_ph_a", "l_ph_b"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, require_positive(name, value))

    @classmethod
    def with_thickness(
        cls, L: float, medium_a: Medium, medium_b: Medium, l_ph: Optional[float] = None
    ) -> "SlabPairGeometry":
        return cls(L, medium_a, medium_b, l_ph, l_ph)

    @property
    def thickness_a(self) -> float:
        if self.l_ph_a is not None:
            return self.l_ph_a
        return photon_lifetime(self.medium_a).l_ph

    @property
    def thickness_b(self) -> float:
        if self.l_ph_b is not None:
            return self.l_ph_b
        return photon_lifetime(self.medium_b).l_ph

    def at(self, L: float) -> "SlabPairGeometry":
        return replace(self, L=L)


@dataclass(frozen=True)
class ForceBreakdown:
    lifshitz: float
    resonant_correction: float
    total: float
    L: float
    variant: LifshitzVariant = LifshitzVariant.AS_PRINTED_TAN

    @property
    def normalized(self) -> float:
        """total / |lifshitz|."""
        if self.lifshitz == 0.0:
            return math.nan
        return self.total / abs(self.lifshitz)


def _check_cutoff(z0: float, cutoff: float) -> float:
    cutoff = require_positive("cutoff", cutoff)
    if cutoff <= z0:
        raise DomainError(f"cutoff must exceed z0 = {z0}, got {cutoff}")
    return cutoff


def halfspace_cutoff_integral(z0: float, cutoff: float) -> float:
    """int_{z0}^{cutoff} dz int_0^{cutoff} rho drho / (rho^2 + z^2).

    The rho integral is (1/2) ln(1 + cutoff^2/z^2); the z integral is adaptive.
    """
    z0 = require_positive("z0", z0)
    cutoff = _check_cutoff(z0, cutoff)

    def shell(z: float) -> float:
        return 0.5 * math.log1p((cutoff / z) ** 2)

    return adaptive_quad(
        shell, z0, cutoff, rel_tol=HALFSPACE_REL_TOL, what=f"half-space cut-off {cutoff!r}"
    )


def divergence_probe(geom: HalfSpaceGeometry, a: AtomSpecies, cutoff: float) -> float:
    """Undamped far-zone resonant potential of atom ``a`` summed over a cut-off half-space.

    -(8 pi n d2_A d2_B omega_A^4 / (9 (omega_B^2 - omega_A^2))) times the cut-off integral.
    The value grows without bound, roughly linearly, as ``cutoff`` increases.

    Raises:
        DomainError: cutoff <= z0.
        DegeneracyError: omega_A == omega_B.
    """
    cutoff = _check_cutoff(geom.z0, cutoff)
    b = geom.medium.species
    if a.d2 == 0.0 or b.d2 == 0.0:
        return 0.0
    if a.omega == b.omega:
        raise DegeneracyError(f"omega_A == omega_B == {a.omega}: undamped probe is singular")
    prefactor = (
        -8.0
        * math.pi
        * geom.medium.density
        * a.d2
        * b.d2
        * a.omega**4
        / (9.0 * (b.omega**2 - a.omega**2))
    )
    return prefactor * halfspace_cutoff_integral(geom.z0, cutoff)


def _radial_moment(m: int, k: float, z: float, r_max: float) -> float:
    """int_z^{r_max} R^{-m} exp(-k R) dR through exponential integrals E_m."""
    value = z ** (1 - m) * expn(m, k * z)
    if math.isfinite(r_max):
        value -= r_max ** (1 - m) * expn(m, k * r_max)
    return value


def u_atom_halfspace_regularized(
    geom: HalfSpaceGeometry,
    a: AtomSpecies,
    ctx: ThermalContext,
    state: PairState = EXCITED_A,
    absorption: Optional[AbsorptionModel] = None,
    r_max: Optional[float] = None,
    rel_tol: float = HALFSPACE_REL_TOL,
) -> float:
    """Damped resonant potential of excited atom ``a`` summed over the gas half-space.

    n * int_{z >= z0} U_r(R) dV. Per slice at depth z the lateral integral becomes a radial
    one, 2 pi int_z^inf R U_r(R) dR, which is closed-form in E_m; the depth integral is
    adaptive. ``absorption`` defaults to the gas's own photon lifetime; ``r_max`` truncates
    the volume to R <= r_max.

    Raises:
        DomainError: the gas does not absorb (infinite L_ph) or r_max <= z0.
        ConvergenceError: the depth integral missed its tolerance.
    """
    z0 = geom.z0
    if not state.resonant_active:
        return 0.0
    if absorption is None:
        absorption = photon_lifetime(geom.medium)
    k = absorption.attenuation
    if k == 0.0:
        raise DomainError("half-space integral needs an absorbing medium (finite l_ph)")
    r_cap = math.inf if r_max is None else _check_cutoff(z0, r_max)
    b = geom.medium.species
    coefficient = resonant_coefficient(a, b, ctx)
    if coefficient == 0.0:
        return 0.0
    w2 = a.omega**2

    def slice_weight(z: float) -> float:
        return (
            2.0
            * math.pi
            * (
                w2 * w2 * _radial_moment(1, k, z, r_cap)
                + w2 * _radial_moment(3, k, z, r_cap)
                + 3.0 * _radial_moment(5, k, z, r_cap)
            )
        )

    what = f"half-space integral at z0={z0!r}"
    # slices deeper than 60 decay lengths carry a relative weight below e^-60
    z_end = min(r_cap, z0 + 60.0 / k)
    landmarks = (2.0 * z0, z0 + 1.0 / k, z0 + 10.0 / k)
    volume = adaptive_quad(
        slice_weight, z0, z_end, rel_tol=rel_tol, points=landmarks, what=what
    )
    return geom.medium.density * coefficient * volume


def slab_geometry_factor(L: float, l_ph_a: float, l_ph_b: Optional[float] = None) -> float:
    """G = int_0^{l_a} int_0^{l_b} dz1 dz2 / (L + z1 + z2).

    For l_a = l_b = l_ph this is
    (2 l_ph + L) ln((2 l_ph + L)/(l_ph + L)) - L ln((l_ph + L)/L).
    """
    L = require_positive("L", L)
    la = require_positive("l_ph_a", l_ph_a)
    lb = la if l_ph_b is None else require_positive("l_ph_b", l_ph_b)
    return (L + la + lb) * math.log1p(lb / (L + la)) - (L + lb) * math.log1p(lb / L) + lb * math.log1p(
        la / L
    )


def thermal_bracket(a: AtomSpecies, b: AtomSpecies, T: float) -> float:
    """omega_A^3 e^{-omega_A/T} coth(omega_A/2T) - omega_B^3 e^{-omega_B/T} coth(omega_B/2T)."""

    def weight(s: AtomSpecies) -> float:
        return s.omega**3 * math.exp(-s.omega / T) * coth_half(s.omega, T)

    return weight(a) - weight(b)


def resonant_correction(geom: SlabPairGeometry, ctx: ThermalContext) -> float:
    """Resonant force correction between two thermally excited gas slabs.

    Raises:
        DomainError: T <= 0.
        DegeneracyError: omega_A == omega_B and gamma_B == 0.
    """
    T = require_positive("T", ctx.T)
    a, b = geom.medium_a.species, geom.medium_b.species
    if a.d2 == 0.0 or b.d2 == 0.0:
        return 0.0
    detuning_sq = b.omega**2 - a.omega**2
    damping = b.gamma * a.omega
    lorentz = detuning_sq * detuning_sq + damping * damping
    if lorentz == 0.0:
        raise DegeneracyError(
            f"omega_A == omega_B == {a.omega} with gamma_B = 0: slab correction is singular"
        )
    populations = (1.0 + math.exp(-a.omega / T)) * (1.0 + math.exp(-b.omega / T))
    prefactor = (
        8.0
        * math.pi
        * a.d2
        * b.d2
        * a.omega
        * b.omega
        * detuning_sq
        * geom.medium_a.density
        * geom.medium_b.density
        / (9.0 * lorentz * populations)
    )
    g = slab_geometry_factor(geom.L, geom.thickness_a, geom.thickness_b)
    return prefactor * thermal_bracket(a, b, T) * g


def _checked_tan(x: float) -> float:
    k = round((x - 0.5 * math.pi) / math.pi)
    if abs(x - (0.5 * math.pi + k * math.pi)) < POLE_DISTANCE:
        raise PoleError(f"tan({x!r}) is within {POLE_DISTANCE} of a pole")
    return math.tan(x)


def lifshitz_force(
    geom: SlabPairGeometry,
    ctx: ThermalContext,
    variant: LifshitzVariant = LifshitzVariant.AS_PRINTED_TAN,
) -> float:
    """High-temperature dilute-gas Lifshitz force per unit area.

    2 pi T d2_A d2_B n_A n_B / (9 L^3 omega_A omega_B) * f(omega_A/2T) f(omega_B/2T),
    f = tan as printed, or tanh for ``LifshitzVariant.TANH_VARIANT``.

    Raises:
        DomainError: T <= 0.
        PoleError: a tan argument sits within 1e-6 of a pole.
    """
    T = require_positive("T", ctx.T)
    a, b = geom.medium_a.species, geom.medium_b.species
    variant = LifshitzVariant(variant)
    f = _checked_tan if variant is LifshitzVariant.AS_PRINTED_TAN else math.tanh
    prefactor = (
        2.0
        * math.pi
        * T
        * a.d2
        * b.d2
        * geom.medium_a.density
        * geom.medium_b.density
        / (9.0 * geom.L**3 * a.omega * b.omega)
    )
    return prefactor * f(a.omega / (2.0 * T)) * f(b.omega / (2.0 * T))


def slab_force(
    geom: SlabPairGeometry,
    ctx: ThermalContext,
    state: PairState = EXCITED_A,
    variant: LifshitzVariant = LifshitzVariant.AS_PRINTED_TAN,
) -> ForceBreakdown:
    """Lifshitz force plus the resonant correction; ``Excitation.NONE`` drops the latter."""
    variant = LifshitzVariant(variant)
    lifshitz = lifshitz_force(geom, ctx, variant)
    correction = resonant_correction(geom, ctx) if state.resonant_active else 0.0
    return ForceBreakdown(lifshitz, correction, lifshitz + correction, geom.L, variant)


def find_sign_changes(xs: Sequence[float], ys: Sequence[float]) -> list:
    """Abscissa intervals (x_i, x_{i+1}) over which ys changes sign."""
    x = np.asarray(xs, dtype=float)
    sign = np.sign(np.asarray(ys, dtype=float))
    idx = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    return [(float(x[i]), float(x[i + 1])) for i in idx]


def crossover_distance(
    geom: SlabPairGeometry,
    ctx: ThermalContext,
    L_lo: float,
    L_hi: float,
    state: PairState = EXCITED_A,
    variant: LifshitzVariant = LifshitzVariant.AS_PRINTED_TAN,
) -> float:
    """Gap L in [L_lo, L_hi] where the total slab force changes sign.

    Raises:
        DomainError: the total force has the same sign at both ends.
    """

    def total(L: float) -> float:
        return slab_force(geom.at(L), ctx, state, variant).total

    lo, hi = total(L_lo), total(L_hi)
    if lo * hi > 0.0:
        raise DomainError(f"total force does not change sign on [{L_lo}, {L_hi}]")
    root = brentq(total, L_lo, L_hi, xtol=1e-14, rtol=1e-13, maxiter=200)
    logger.info("slab force crossover at L=%r", root)
    return root
