"""Finite-temperature atom-atom potential inside an absorbing dilute gas.

Non-resonant part: the Matsubara sum

    U_nr = -2T sum'_{n>=0} alpha_A(i zeta_n) alpha_B(i zeta_n) zeta_n^6 e^{-2 zeta_n R} P(zeta_n R),
    zeta_n = 2 pi n T,

where the primed sum halves the n = 0 term. zeta^6 P(zeta R) -> 3/R^6 as zeta -> 0, so the
n = 0 term is taken analytically as -T alpha_A(0) alpha_B(0) 3 / R^6.

Resonant part, A excited, B the ground-state partner with linewidth gamma_B:

    U_r = -(2/9) coth(omega_A/2T) d2_A d2_B omega_A^6 (omega_B - omega_A)
          / ((omega_B - omega_A)^2 + (gamma_B/2)^2)
          * [1/(omega_A R)^2 + 1/(omega_A R)^4 + 3/(omega_A R)^6] * exp(-gamma_ph R / 2)

with coth -> 1 at T = 0. Photons are absorbed by the gas at the rate
gamma_ph = 8 pi omega d2 n / (3 gamma) of its own species; L_ph = 1/gamma_ph (c = 1).

In the undamped, zero-temperature limit U_r reduces to the far-zone resonant formula
only close to resonance, where omega_B + omega_A ~ 2 omega_A.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .core import EXCITED_A, AtomSpecies, Medium, PairState, require_nonnegative, require_positive
from .errors import ConvergenceError, DegeneracyError, DomainError
from .pair_zero_t import (
    PairPotentialBreakdown,
    resonant_distance_factor,
    retardation_polynomial,
    u_nonresonant_integral,
)
from .response import Polarizability

logger = logging.getLogger(__name__)

MATSUBARA_BLOCK = 4096


@dataclass(frozen=True)
class ThermalContext:
    """Temperature and Matsubara truncation parameters.

    Args:
        T: temperature, >= 0.
        n_max: largest Matsubara index the sum may reach before giving up.
        tail_tol: relative truncation tolerance of the Matsubara sum.
    """

    T: float
    n_max: int = 200_000
    tail_tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "T", require_nonnegative("T", self.T))
        if isinstance(self.n_max, bool) or int(self.n_max) != self.n_max or self.n_max < 1:
            raise DomainError(f"n_max must be a positive integer, got {self.n_max!r}")
        object.__setattr__(self, "n_max", int(self.n_max))
        tol = require_positive("tail_tol", self.tail_tol)
        if tol >= 1.0:
            raise DomainError(f"tail_tol must be < 1, got {tol}")
        object.__setattr__(self, "tail_tol", tol)

    def zeta(self, n):
        return 2.0 * math.pi * self.T * n


@dataclass(frozen=True)
class AbsorptionModel:
    """Photon decay rate in the gas and the matching mean free path (c = 1)."""

    gamma_ph: float
    l_ph: float

    def __post_init__(self):
        g = require_nonnegative("gamma_ph", self.gamma_ph)
        expected = math.inf if g == 0.0 else 1.0 / g
        if self.l_ph != expected and not math.isclose(self.l_ph, expected, rel_tol=1e-12):
            raise DomainError(f"l_ph must equal 1/gamma_ph = {expected}, got {self.l_ph}")
        object.__setattr__(self, "gamma_ph", g)

    @classmethod
    def from_rate(cls, gamma_ph: float) -> "AbsorptionModel":
        g = require_nonnegative("gamma_ph", gamma_ph)
        return cls(g, math.inf if g == 0.0 else 1.0 / g)

    @classmethod
    def transparent(cls) -> "AbsorptionModel":
        return cls(0.0, math.inf)

    @property
    def attenuation(self) -> float:
        """Spatial decay constant of the resonant term, gamma_ph / 2."""
        return 0.5 * self.gamma_ph


def photon_lifetime(medium: Medium, allow_transparent: bool = False) -> AbsorptionModel:
    """Absorption model of a dilute gas from the properties of its own species.

    gamma_ph = 8 pi omega d2 n / (3 gamma). A gas that does not absorb is one whose
    species has d2 = 0: a ``Medium`` cannot be built with density 0, so
    ``allow_transparent`` keys on d2 rather than on the density. Either way gamma_ph
    vanishes and the transparent model (gamma_ph = 0, l_ph = inf) is returned.

    Raises:
        DomainError: the species has d2 = 0 (unless ``allow_transparent``) or gamma = 0.
    """
    s = medium.species
    if s.d2 == 0.0:
        if allow_transparent:
            return AbsorptionModel.transparent()
        raise DomainError("photon lifetime needs d2 > 0 (transparent gas has no absorption)")
    if s.gamma == 0.0:
        raise DomainError("photon lifetime needs gamma > 0 (gamma = 0 gives zero mean free path)")
    gamma_ph = 8.0 * math.pi * s.omega * s.d2 * medium.density / (3.0 * s.gamma)
    return AbsorptionModel(gamma_ph, 1.0 / gamma_ph)


def coth_half(omega: float, T: float) -> float:
    """coth(omega / 2T), with its T -> 0 limit 1."""
    if T == 0.0:
        return 1.0
    return 1.0 / math.tanh(omega / (2.0 * T))


def u_thermal_nonresonant(a: AtomSpecies, b: AtomSpecies, R: float, ctx: ThermalContext) -> float:
    """Non-resonant potential as a certified Matsubara sum; T = 0 falls back to the integral.

    The sum stops at the first n whose geometric tail estimate
    term_n / (1 - term_n/term_{n-1}) is below ``ctx.tail_tol`` times the partial sum.

    Raises:
        DomainError: R <= 0.
        ConvergenceError: ``ctx.n_max`` reached before the tail was certified.
    """
    R = require_positive("R", R)
    T = ctx.T
    if T == 0.0:
        return u_nonresonant_integral(a, b, R)
    pol_a, pol_b = Polarizability(a), Polarizability(b)
    first = 3.0 * pol_a.static * pol_b.static
    if first == 0.0:
        return 0.0

    # reduced terms s_n; U = -2T/R^6 * (s_0/2 + sum s_n)
    total = 0.5 * first
    previous = first
    start = 1
    while start <= ctx.n_max:
        stop = min(start + MATSUBARA_BLOCK, ctx.n_max + 1)
        zeta = ctx.zeta(np.arange(start, stop, dtype=float))
        x = zeta * R
        terms = pol_a.at(zeta) * pol_b.at(zeta) * retardation_polynomial(x) * np.exp(-2.0 * x)
        before = total + np.concatenate(([0.0], np.cumsum(terms[:-1])))
        prior = np.concatenate(([previous], terms[:-1]))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(prior > 0.0, terms / prior, 0.0)
            tail = np.where(ratio < 1.0, terms / (1.0 - ratio), np.inf)
        certified = np.flatnonzero(tail <= ctx.tail_tol * np.abs(before))
        if certified.size:
            k = int(certified[0])
            logger.debug("Matsubara sum at T=%r R=%r truncated at n=%d", T, R, start + k)
            return -2.0 * T * float(before[k]) / R**6
        total = float(before[-1] + terms[-1])
        previous = float(terms[-1])
        start = stop
    raise ConvergenceError(
        f"Matsubara sum at T={T!r}, R={R!r} not certified to {ctx.tail_tol} "
        f"within n_max={ctx.n_max}"
    )


def resonant_coefficient(a: AtomSpecies, b: AtomSpecies, ctx: ThermalContext) -> float:
    """Distance-independent part of U_r (without omega_A^6 and the distance bracket).

    -(2/9) coth(omega_A/2T) d2_A d2_B (omega_B - omega_A) / ((omega_B - omega_A)^2 + (gamma_B/2)^2)

    Raises:
        DegeneracyError: omega_A == omega_B and gamma_B == 0.
    """
    detuning = b.omega - a.omega
    width = 0.5 * b.gamma
    denominator = detuning * detuning + width * width
    if denominator == 0.0:
        raise DegeneracyError(
            f"omega_A == omega_B == {a.omega} with gamma_B = 0: damped resonant term is singular"
        )
    return -2.0 / 9.0 * coth_half(a.omega, ctx.T) * a.d2 * b.d2 * detuning / denominator


def u_thermal_resonant(
    a: AtomSpecies,
    b: AtomSpecies,
    R: float,
    ctx: ThermalContext,
    absorption: AbsorptionModel,
    state: PairState = EXCITED_A,
) -> float:
    """Damped, absorbed resonant term; ``a`` is the excited atom, gamma_B is ``b.gamma``."""
    R = require_positive("R", R)
    if not state.resonant_active:
        return 0.0
    unabsorbed = resonant_coefficient(a, b, ctx) * resonant_distance_factor(a.omega, R)
    return unabsorbed * math.exp(-absorption.attenuation * R)


def thermal_pair_potential(
    a: AtomSpecies,
    b: AtomSpecies,
    R: float,
    ctx: ThermalContext,
    absorption: AbsorptionModel,
    state: PairState = EXCITED_A,
) -> PairPotentialBreakdown:
    non_resonant = u_thermal_nonresonant(a, b, R, ctx)
    resonant = u_thermal_resonant(a, b, R, ctx, absorption, state)
    return PairPotentialBreakdown.of(non_resonant, resonant, R)
