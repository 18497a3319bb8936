"""Zero-temperature interaction of two two-level atoms.

The full potential is a non-resonant imaginary-frequency integral plus, when atom A is
excited, a resonant term with the detuning denominator omega_B^2 - omega_A^2:

    U(R) = -(1/pi) int_0^inf alpha_A(iu) alpha_B(iu) u^6 e^{-2uR} P(uR) du
           -(4/9) d2_A d2_B omega_A^6 / (omega_B^2 - omega_A^2)
                  * [1/(omega_A R)^2 + 1/(omega_A R)^4 + 3/(omega_A R)^6] * theta

with P(x) = 1/x^2 + 2/x^3 + 5/x^4 + 6/x^5 + 3/x^6. The integrand is evaluated in the
fused form u^6 P(uR) = (x^4 + 2x^3 + 5x^2 + 6x + 3) / R^6, x = uR, which is finite at
u = 0.

Limits provided alongside: London (R^-6) and Casimir-Polder (R^-7) for the
non-resonant part, and the R^-6 / R^-2 asymptotes of the resonant term.

The commonly printed near-zone resonant formula carries an extra omega_A^6 in its
numerator. Taking R -> 0 in the resonant term above leaves
-(4/3) d2_A d2_B / ((omega_B^2 - omega_A^2) R^6) with no omega_A dependence, and that
limit is what ``u_resonant_near_limit`` returns.
"""

import logging
import math
from dataclasses import dataclass

from .core import EXCITED_A, AtomSpecies, PairState, require_positive
from .errors import DegeneracyError
from .integrate import semi_infinite_quad
from .response import Polarizability, alpha_static

logger = logging.getLogger(__name__)

NONRESONANT_REL_TOL = 1e-9


@dataclass(frozen=True)
class PairPotentialBreakdown:
    non_resonant: float
    resonant: float
    total: float
    R: float

    @classmethod
    def of(cls, non_resonant: float, resonant: float, R: float) -> "PairPotentialBreakdown":
        return cls(non_resonant, resonant, non_resonant + resonant, R)


def retardation_polynomial(x: float) -> float:
    """x^4 + 2x^3 + 5x^2 + 6x + 3, i.e. (uR)^6 * P(uR)."""
    return (((x + 2.0) * x + 5.0) * x + 6.0) * x + 3.0


def resonant_distance_factor(omega: float, R: float) -> float:
    """omega^6 * [1/(omega R)^2 + 1/(omega R)^4 + 3/(omega R)^6]."""
    inv = 1.0 / (omega * R) ** 2
    return omega**6 * inv * (1.0 + inv * (1.0 + 3.0 * inv))


def _detuning_sq(a: AtomSpecies, b: AtomSpecies) -> float:
    if a.omega == b.omega:
        raise DegeneracyError(
            f"omega_A == omega_B == {a.omega}: undamped resonant term is singular, "
            "use the damped thermal form"
        )
    return b.omega**2 - a.omega**2


def u_nonresonant_integral(
    a: AtomSpecies, b: AtomSpecies, R: float, rel_tol: float = NONRESONANT_REL_TOL
) -> float:
    """Non-resonant potential by adaptive quadrature over imaginary frequency.

    Raises:
        DomainError: R <= 0.
        ConvergenceError: the quadrature missed ``rel_tol``.
    """
    R = require_positive("R", R)
    if a.d2 == 0.0 or b.d2 == 0.0:
        return 0.0
    pol_a, pol_b = Polarizability(a), Polarizability(b)
    two_r = 2.0 * R

    def integrand(u: float) -> float:
        return pol_a.at(u) * pol_b.at(u) * retardation_polynomial(u * R) * math.exp(-two_r * u)

    scale = max(a.omega, b.omega, 1.0 / R)
    integral = semi_infinite_quad(
        integrand,
        scale,
        rel_tol=rel_tol,
        landmarks=(a.omega, b.omega, 1.0 / two_r),
        what=f"non-resonant integral at R={R!r}",
    )
    return -integral / (math.pi * R**6)


def u_resonant(
    a: AtomSpecies, b: AtomSpecies, R: float, state: PairState = EXCITED_A
) -> float:
    """Undamped resonant term; ``a`` is the excited atom.

    Raises:
        DomainError: R <= 0.
        DegeneracyError: omega_A == omega_B while the term is active.
    """
    R = require_positive("R", R)
    if not state.resonant_active:
        return 0.0
    detuning_sq = _detuning_sq(a, b)
    return -4.0 / 9.0 * a.d2 * b.d2 / detuning_sq * resonant_distance_factor(a.omega, R)


def u_london(a: AtomSpecies, b: AtomSpecies, R: float) -> float:
    R = require_positive("R", R)
    return -2.0 / 3.0 * a.d2 * b.d2 / ((a.omega + b.omega) * R**6)


def u_casimir_polder(a: AtomSpecies, b: AtomSpecies, R: float) -> float:
    R = require_positive("R", R)
    return -23.0 / (4.0 * math.pi * R**7) * alpha_static(a) * alpha_static(b)


def u_resonant_near_limit(a: AtomSpecies, b: AtomSpecies, R: float) -> float:
    """R^-6 term of ``u_resonant``: -(4/3) d2_A d2_B / ((omega_B^2 - omega_A^2) R^6)."""
    R = require_positive("R", R)
    return -4.0 / 3.0 * a.d2 * b.d2 / (_detuning_sq(a, b) * R**6)


def u_resonant_far_limit(a: AtomSpecies, b: AtomSpecies, R: float) -> float:
    """R^-2 term of ``u_resonant``."""
    R = require_positive("R", R)
    return -4.0 / 9.0 * a.d2 * b.d2 * a.omega**4 / (_detuning_sq(a, b) * R**2)


def pair_potential(
    a: AtomSpecies, b: AtomSpecies, R: float, state: PairState = EXCITED_A
) -> PairPotentialBreakdown:
    non_resonant = u_nonresonant_integral(a, b, R)
    resonant = u_resonant(a, b, R, state)
    return PairPotentialBreakdown.of(non_resonant, resonant, R)
