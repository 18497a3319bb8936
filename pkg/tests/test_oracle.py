import numpy as np
import pytest

from casimir_media.core import GROUND, make_medium, make_species
from casimir_media.geometry import (
    HalfSpaceGeometry,
    SlabPairGeometry,
    halfspace_cutoff_integral,
    divergence_probe,
    resonant_correction,
    u_atom_halfspace_regularized,
)
from casimir_media.oracle import (
    OracleConfig,
    oracle_cutoff_integral,
    oracle_divergence_probe,
    oracle_halfspace_sum,
    oracle_matsubara_sum,
    oracle_nonresonant_integral,
    oracle_slab_numeric,
)
from casimir_media.pair_thermal import AbsorptionModel, ThermalContext, u_thermal_nonresonant
from casimir_media.pair_zero_t import u_nonresonant_integral

A1 = make_species(1.0, 1.0)
B2 = make_species(2.0, 1.0)
GAS = make_medium(make_species(1.2, 1.0, 0.1), 1e-2)
FAST = OracleConfig(grid_points=20_000)


def slab_media(L, l_ph=1.0):
    return SlabPairGeometry.with_thickness(
        L,
        make_medium(make_species(1.1, 1.0, 1e-3), 1e-3),
        make_medium(make_species(1.0, 1.0, 1e-3), 1e-3),
        l_ph,
    )


def test_oracle_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(grid_points=10)
    with pytest.raises(ValueError):
        OracleConfig(richardson_levels=0)


@pytest.mark.parametrize("R", np.logspace(-1.0, 2.0, 10))
def test_nonresonant_integral_matches_oracle(R):
    for ratio in np.linspace(0.5, 4.0, 10):
        b = make_species(ratio, 0.7)
        production = u_nonresonant_integral(A1, b, R)
        reference = oracle_nonresonant_integral(A1, b, R, FAST)
        assert production == pytest.approx(reference, rel=1e-6)


def test_plain_midpoint_close():
    coarse = oracle_nonresonant_integral(A1, B2, 1.0, OracleConfig(grid_points=1000, richardson_levels=1))
    assert coarse == pytest.approx(u_nonresonant_integral(A1, B2, 1.0), rel=1e-3)


def test_midpoint_second_order():
    # the full-domain integrand is flat at u = 0 and at the cap; ending at x = uR = 2
    # leaves a nonzero slope there and the h^2 term of the midpoint rule
    def plain(n):
        cfg = OracleConfig(grid_points=n, domain_cap=4.0, richardson_levels=1)
        return oracle_nonresonant_integral(A1, B2, 1.0, cfg)

    coarse, mid, fine = plain(1000), plain(2000), plain(4000)
    assert (coarse - mid) / (mid - fine) == pytest.approx(4.0, rel=0.02)
    def extrapolated(levels):
        cfg = OracleConfig(grid_points=1000, domain_cap=4.0, richardson_levels=levels)
        return oracle_nonresonant_integral(A1, B2, 1.0, cfg)

    best = extrapolated(3)
    assert abs(extrapolated(2) - best) < 1e-3 * abs(fine - best)


def test_oracle_zero_dipole():
    assert oracle_nonresonant_integral(make_species(1.0, 0.0), B2, 1.0, FAST) == 0.0


def test_matsubara_oracle_cap_validation():
    with pytest.raises(ValueError):
        oracle_matsubara_sum(A1, B2, 1.0, 1.0, 0)


def test_matsubara_high_temperature_cap_irrelevant():
    assert oracle_matsubara_sum(A1, B2, 1.0, 10.0, 1) == pytest.approx(
        oracle_matsubara_sum(A1, B2, 1.0, 10.0, 100), rel=1e-12
    )


def test_matsubara_sum_matches_oracle():
    rng = np.random.default_rng(5)
    for R, T in zip(rng.uniform(0.5, 5.0, 6), rng.uniform(0.1, 2.0, 6)):
        ctx = ThermalContext(T)
        production = u_thermal_nonresonant(A1, B2, R, ctx)
        reference = oracle_matsubara_sum(A1, B2, R, T, 2000)
        assert production == pytest.approx(reference, rel=10 * ctx.tail_tol)


def test_halfspace_matches_shell_sum():
    geom = HalfSpaceGeometry(1.0, GAS)
    absorption = AbsorptionModel.from_rate(0.1)
    ctx = ThermalContext(0.0)
    production = u_atom_halfspace_regularized(
        geom, A1, ctx, absorption=absorption, r_max=40.0 / absorption.gamma_ph
    )
    coarse = oracle_halfspace_sum(geom, A1, ctx, absorption=absorption)
    fine = oracle_halfspace_sum(geom, A1, ctx, shell_width=1.0 / 400.0, absorption=absorption)
    assert coarse == pytest.approx(production, rel=1e-4)
    assert fine == pytest.approx(production, rel=1e-4)
    improvement = abs(coarse - production) / abs(fine - production)
    assert 2.5 <= improvement <= 5.0


def test_halfspace_oracle_ground_state():
    geom = HalfSpaceGeometry(1.0, GAS)
    assert oracle_halfspace_sum(geom, A1, ThermalContext(0.0), GROUND) == 0.0
    with pytest.raises(ValueError):
        oracle_halfspace_sum(geom, A1, ThermalContext(0.0), shell_width=0.0)


@pytest.mark.parametrize("z0, cutoff", [(1.0, 10.0), (0.5, 5.0)])
def test_cutoff_integral_matches_grid(z0, cutoff):
    assert halfspace_cutoff_integral(z0, cutoff) == pytest.approx(
        oracle_cutoff_integral(z0, cutoff), rel=1e-6
    )


def test_divergence_probe_matches_grid():
    geom = HalfSpaceGeometry(1.0, GAS)
    assert divergence_probe(geom, A1, 20.0) == pytest.approx(
        oracle_divergence_probe(geom, A1, 20.0), rel=1e-6
    )


@pytest.mark.parametrize("L", [2.0, 5.0, 20.0])
def test_slab_correction_matches_volume_sum(L):
    geom = slab_media(L)
    for T in (0.4, 0.5):
        ctx = ThermalContext(T)
        closed = resonant_correction(geom, ctx)
        numeric = oracle_slab_numeric(geom, ctx)
        assert np.sign(numeric) == np.sign(closed)
        assert numeric == pytest.approx(closed, rel=1e-3)


def test_pair_bookkeeping_opposite_sign():
    geom = slab_media(2.0)
    ctx = ThermalContext(0.4)
    assert oracle_slab_numeric(geom, ctx, bookkeeping="pair") < 0.0
    assert oracle_slab_numeric(geom, ctx) > 0.0


def test_slab_oracle_options():
    geom = slab_media(2.0)
    assert oracle_slab_numeric(geom, ThermalContext(0.4), GROUND) == 0.0
    with pytest.raises(ValueError):
        oracle_slab_numeric(geom, ThermalContext(0.4), bookkeeping="volume")
