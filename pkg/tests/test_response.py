import math

import numpy as np
import pytest

from casimir_media.core import make_species
from casimir_media.errors import DomainError
from casimir_media.response import Polarizability, alpha_iu, alpha_static


def test_alpha_iu_values():
    s = make_species(1.0, 1.5)
    assert alpha_iu(s, 0.0) == pytest.approx(1.0, rel=1e-15)
    assert alpha_iu(s, 1.0) == pytest.approx(0.5, rel=1e-15)


def test_alpha_iu_decays():
    s = make_species(2.0, 1.0)
    u = np.geomspace(1e-3, 1e8, 50)
    values = alpha_iu(s, u)
    assert np.all(np.diff(values) < 0.0)
    assert values[-1] < 1e-15
    assert np.all(values > 0.0)


@pytest.mark.parametrize(
    "omega, d2, expected", [(1.0, 1.5, 1.0), (2.0, 3.0, 1.0), (1.0, 0.0, 0.0)]
)
def test_alpha_static(omega, d2, expected):
    s = make_species(omega, d2)
    assert alpha_static(s) == pytest.approx(expected, rel=1e-15, abs=0.0)
    assert alpha_static(s) == alpha_iu(s, 0.0)


@pytest.mark.parametrize("u", [-1.0, math.inf, math.nan])
def test_alpha_iu_rejects(u):
    with pytest.raises(DomainError):
        alpha_iu(make_species(1.0, 1.0), u)


def test_alpha_iu_rejects_array():
    with pytest.raises(DomainError):
        alpha_iu(make_species(1.0, 1.0), np.array([0.0, -1.0]))


def test_prefactor_reconstruction():
    rng = np.random.default_rng(11)
    for wa, wb, da, db, u in rng.uniform(0.05, 5.0, size=(100, 5)):
        a, b = make_species(wa, da), make_species(wb, db)
        lhs = alpha_iu(a, u) * alpha_iu(b, u) / math.pi
        rhs = 4.0 / (9.0 * math.pi) * wa * wb * da * db / ((wa**2 + u**2) * (wb**2 + u**2))
        assert lhs == pytest.approx(rhs, rel=1e-13)


def test_alpha_times_denominator_constant():
    s = make_species(1.7, 0.4)
    u = np.linspace(0.0, 10.0, 21)
    product = alpha_iu(s, u) * (s.omega**2 + u**2)
    np.testing.assert_allclose(product, product[0], rtol=1e-14)


def test_polarizability_wrapper():
    p = Polarizability(make_species(1.0, 1.5))
    assert p.static == pytest.approx(1.0)
    assert p.at(1.0) == pytest.approx(0.5)
