"""Slow, deliberately simple reference evaluations used by the test-suite.

Nothing here calls the adaptive integrators or the truncation logic of the production
modules; fixed grids, midpoint rules and plain loops only, so each routine can be checked
by reading it. The physical inputs (species, media, the pair-potential prefactors) are
shared, the numerics are not.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import EXCITED_A, AtomSpecies, PairState
from .geometry import HalfSpaceGeometry, SlabPairGeometry
from .pair_thermal import AbsorptionModel, ThermalContext, photon_lifetime, resonant_coefficient
from .response import alpha_iu


@dataclass(frozen=True)
class OracleConfig:
    """Fixed-grid settings.

    Args:
        grid_points: midpoint cells on the coarsest grid, >= 1000.
        domain_cap: upper frequency limit as a multiple of 1/(2R); e^-60 is far below 1e-12.
        richardson_levels: number of grids (N, 2N, 4N, ...); 1 means plain midpoint.
    """

    grid_points: int = 200_000
    domain_cap: float = 60.0
    richardson_levels: int = 3

    def __post_init__(self):
        if self.grid_points < 1000:
            raise ValueError(f"grid_points must be >= 1000, got {self.grid_points}")
        if self.richardson_levels < 1:
            raise ValueError(f"richardson_levels must be >= 1, got {self.richardson_levels}")


def _richardson(estimates):
    """Eliminate h^2, h^4, ... from midpoint values on successively halved grids."""
    table = list(estimates)
    factor = 4.0
    while len(table) > 1:
        table = [(factor * fine - coarse) / (factor - 1.0) for coarse, fine in zip(table, table[1:])]
        factor *= 4.0
    return table[0]


def _midpoint(func, a: float, b: float, n: int) -> float:
    h = (b - a) / n
    x = a + h * (np.arange(n) + 0.5)
    return float(np.sum(func(x)) * h)


def oracle_nonresonant_integral(
    a: AtomSpecies, b: AtomSpecies, R: float, cfg: OracleConfig = OracleConfig()
) -> float:
    """-(1/pi R^6) int_0^cap alpha_A alpha_B (x^4 + 2x^3 + 5x^2 + 6x + 3) e^{-2x} du, x = uR."""
    if a.d2 == 0.0 or b.d2 == 0.0:
        return 0.0
    cap = cfg.domain_cap / (2.0 * R)

    def integrand(u):
        x = u * R
        poly = x**4 + 2.0 * x**3 + 5.0 * x**2 + 6.0 * x + 3.0
        return alpha_iu(a, u) * alpha_iu(b, u) * poly * np.exp(-2.0 * x)

    estimates = [
        _midpoint(integrand, 0.0, cap, cfg.grid_points * 2**level)
        for level in range(cfg.richardson_levels)
    ]
    return -_richardson(estimates) / (math.pi * R**6)


def oracle_matsubara_sum(
    a: AtomSpecies, b: AtomSpecies, R: float, T: float, n_cap: int
) -> float:
    """-(2T/R^6) sum'_{n=0}^{n_cap} alpha_A alpha_B P(zeta R) e^{-2 zeta R}, term by term."""
    if n_cap < 1:
        raise ValueError(f"n_cap must be >= 1, got {n_cap}")
    total = 0.0
    for n in range(n_cap + 1):
        zeta = 2.0 * math.pi * n * T
        x = zeta * R
        poly = x**4 + 2.0 * x**3 + 5.0 * x**2 + 6.0 * x + 3.0
        term = float(alpha_iu(a, zeta) * alpha_iu(b, zeta)) * poly * math.exp(-2.0 * x)
        total += 0.5 * term if n == 0 else term
    return -2.0 * T * total / R**6


def oracle_halfspace_sum(
    geom: HalfSpaceGeometry,
    a: AtomSpecies,
    ctx: ThermalContext,
    state: PairState = EXCITED_A,
    shell_width: Optional[float] = None,
    absorption: Optional[AbsorptionModel] = None,
) -> float:
    """n * sum over spherical shells of U_r(R) times the shell volume inside the gas.

    The part of a sphere of radius R >= z0 around the atom that lies in the half-space
    has area 2 pi R (R - z0). Shells run from z0 to 40/gamma_ph, midpoint radii.
    """
    if not state.resonant_active:
        return 0.0
    if absorption is None:
        absorption = photon_lifetime(geom.medium)
    z0 = geom.z0
    dr = z0 / 200.0 if shell_width is None else shell_width
    if dr <= 0.0:
        raise ValueError(f"shell_width must be > 0, got {dr}")
    r_end = 40.0 / absorption.gamma_ph
    shells = int(math.ceil((r_end - z0) / dr))
    r = z0 + dr * (np.arange(shells) + 0.5)
    w = a.omega
    u_r = (
        resonant_coefficient(a, geom.medium.species, ctx)
        * (w**4 / r**2 + w**2 / r**4 + 3.0 / r**6)
        * np.exp(-0.5 * absorption.gamma_ph * r)
    )
    volume = 2.0 * math.pi * r * (r - z0) * dr
    return geom.medium.density * float(np.sum(u_r * volume))


def oracle_cutoff_integral(z0: float, cutoff: float, cells: int = 1000) -> float:
    """int_{z0}^{cutoff} dz int_0^{cutoff} rho drho / (rho^2 + z^2) on a 2D midpoint grid.

    Grids of ``cells`` and 2 * ``cells`` per axis, one Richardson step.
    """

    def grid(n: int) -> float:
        hz = (cutoff - z0) / n
        hr = cutoff / n
        z = z0 + hz * (np.arange(n) + 0.5)
        rho = hr * (np.arange(n) + 0.5)
        return float(np.sum(rho[None, :] / (rho[None, :] ** 2 + z[:, None] ** 2)) * hz * hr)

    return _richardson([grid(cells), grid(2 * cells)])


def oracle_divergence_probe(
    geom: HalfSpaceGeometry, a: AtomSpecies, cutoff: float, cells: int = 1000
) -> float:
    b = geom.medium.species
    prefactor = (
        -8.0
        * math.pi
        * geom.medium.density
        * a.d2
        * b.d2
        * a.omega**4
        / (9.0 * (b.omega**2 - a.omega**2))
    )
    return prefactor * oracle_cutoff_integral(geom.z0, cutoff, cells)


def _slab_pair_coefficient(geom: SlabPairGeometry, T: float) -> float:
    """C of U = -C/R^2 with the frequency and population factors of the slab correction."""
    a, b = geom.medium_a.species, geom.medium_b.species
    detuning_sq = b.omega**2 - a.omega**2
    lorentz = detuning_sq**2 + (b.gamma * a.omega) ** 2
    pop = (1.0 + math.exp(-a.omega / T)) * (1.0 + math.exp(-b.omega / T))
    weight_a = a.omega**3 * math.exp(-a.omega / T) / math.tanh(a.omega / (2.0 * T))
    weight_b = b.omega**3 * math.exp(-b.omega / T) / math.tanh(b.omega / (2.0 * T))
    return (
        4.0
        * a.d2
        * b.d2
        * a.omega
        * b.omega
        * detuning_sq
        * (weight_a - weight_b)
        / (9.0 * lorentz * pop)
    )


def _pair_bookkeeping_coefficient(geom: SlabPairGeometry, ctx: ThermalContext) -> float:
    """C from the damped far-zone pair term, each species excited with its thermal weight."""
    a, b = geom.medium_a.species, geom.medium_b.species
    T = ctx.T
    excited_a = math.exp(-a.omega / T) / (1.0 + math.exp(-a.omega / T))
    excited_b = math.exp(-b.omega / T) / (1.0 + math.exp(-b.omega / T))
    return -(
        excited_a * resonant_coefficient(a, b, ctx) * a.omega**4
        + excited_b * resonant_coefficient(b, a, ctx) * b.omega**4
    )


def oracle_slab_numeric(
    geom: SlabPairGeometry,
    ctx: ThermalContext,
    state: PairState = EXCITED_A,
    bookkeeping: str = "slab",
    cells: int = 400,
) -> float:
    """Resonant force correction per unit area from a brute-force slab-slab sum.

    The energy per unit area W(L) = n_A n_B int dz1 int dz2 int d^2rho U(D, rho), D = L + z1 + z2,
    U = -C / (D^2 + rho^2). The rho integral is done in closed form up to rho_max, giving
    -pi C ln(1 + rho_max^2 / D^2); z1 in [0, L_a], z2 in [0, L_b] by midpoint rule.
    F = +dW/dL by central difference with step L/1000 (positive = attraction).

    ``bookkeeping="slab"`` takes C with the frequency factors of the closed-form slab
    correction; ``"pair"`` builds C from the far-zone pair term, which at omega_A = 1.1,
    T = 0.4 has the opposite sign.
    """
    if not state.resonant_active:
        return 0.0
    if bookkeeping == "slab":
        coefficient = _slab_pair_coefficient(geom, ctx.T)
    elif bookkeeping == "pair":
        coefficient = _pair_bookkeeping_coefficient(geom, ctx)
    else:
        raise ValueError(f"bookkeeping must be 'slab' or 'pair', got {bookkeeping!r}")
    la, lb = geom.thickness_a, geom.thickness_b
    L = geom.L
    rho_max = 1e4 * (L + la + lb)
    z1 = la / cells * (np.arange(cells) + 0.5)
    z2 = lb / cells * (np.arange(cells) + 0.5)
    cell_area = (la / cells) * (lb / cells)

    def energy(gap: float) -> float:
        d = gap + z1[:, None] + z2[None, :]
        lateral = -math.pi * coefficient * np.log1p((rho_max / d) ** 2)
        return geom.medium_a.density * geom.medium_b.density * float(np.sum(lateral)) * cell_area

    step = L / 1e3
    return (energy(L + step) - energy(L - step)) / (2.0 * step)
