"""Casimir-Polder and van der Waals interactions of atoms in dilute absorbing gases."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    EXCITED_A,
    GROUND,
    NATURAL_UNITS,
    AtomSpecies,
    Excitation,
    Medium,
    PairState,
    UnitSystem,
    make_medium,
    make_species,
)
from .errors import (  # noqa: E402
    CasimirError,
    ConfigError,
    ConvergenceError,
    DegeneracyError,
    DomainError,
    PoleError,
)
from .geometry import (  # noqa: E402
    ForceBreakdown,
    HalfSpaceGeometry,
    LifshitzVariant,
    SlabPairGeometry,
    divergence_probe,
    lifshitz_force,
    slab_force,
    slab_geometry_factor,
    u_atom_halfspace_regularized,
)
from .pair_thermal import (  # noqa: E402
    AbsorptionModel,
    ThermalContext,
    photon_lifetime,
    thermal_pair_potential,
    u_thermal_nonresonant,
    u_thermal_resonant,
)
from .pair_zero_t import (  # noqa: E402
    PairPotentialBreakdown,
    pair_potential,
    u_casimir_polder,
    u_london,
    u_nonresonant_integral,
    u_resonant,
    u_resonant_far_limit,
    u_resonant_near_limit,
)
from .response import Polarizability, alpha_iu, alpha_static  # noqa: E402
