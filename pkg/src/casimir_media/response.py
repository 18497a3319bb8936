"""Dynamic polarizability of a two-level species on the imaginary frequency axis.

The pair potentials never write alpha(iu) out; they carry the product

    (4 / 9 pi) * omega_A omega_B d2_A d2_B / ((omega_A^2 + u^2)(omega_B^2 + u^2)).

For an isotropic two-level atom the only scalar form that splits this product into
(1/pi) * alpha_A(iu) * alpha_B(iu) is

    alpha(iu) = (2/3) * d2 * omega / (omega^2 + u^2),

because (2/3)^2 = 4/9. That is the form used here, for the ground-state and the excited
partner alike: no distinct excited-state polarizability is available for a two-level
species, so alpha_e is taken equal to alpha_g evaluated for the respective species.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import AtomSpecies
from .errors import DomainError

ArrayLike = Union[float, np.ndarray]


def _two_level(species: AtomSpecies, u: ArrayLike) -> ArrayLike:
    return 2.0 * species.d2 * species.omega / (3.0 * (species.omega**2 + u * u))


def alpha_iu(species: AtomSpecies, u: ArrayLike) -> ArrayLike:
    """alpha(iu) for u >= 0. Accepts a scalar or a numpy array of frequencies.

    Raises:
        DomainError: any u negative or non-finite.
    """
    if isinstance(u, np.ndarray):
        if not np.all(np.isfinite(u)) or np.any(u < 0.0):
            raise DomainError("imaginary frequency u must be finite and >= 0")
        return _two_level(species, u)
    u = float(u)
    if not math.isfinite(u) or u < 0.0:
        raise DomainError(f"imaginary frequency u must be finite and >= 0, got {u}")
    return _two_level(species, u)


def alpha_static(species: AtomSpecies) -> float:
    """alpha(0); identical to ``alpha_iu(species, 0.0)`` by construction."""
    return alpha_iu(species, 0.0)


@dataclass(frozen=True)
class Polarizability:
    species: AtomSpecies

    def at(self, u: ArrayLike) -> ArrayLike:
        return alpha_iu(self.species, u)

    @property
    def static(self) -> float:
        return alpha_static(self.species)
