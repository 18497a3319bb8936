"""Distance and temperature sweeps over the three geometries.

A sweep evaluates one row per abscissa. Rows fail independently: a CasimirError turns
the row's numeric columns into NaN and records ``ExceptionName: message`` in the
``error`` column, the remaining rows are still computed.
"""

import json
import logging
import math
from contextlib import contextmanager, nullcontext
from dataclasses import dataclass, field
from functools import partial
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO, Union

import numpy as np
import pandas as pd

from . import __version__
from .config import RunConfig
from .core import NATURAL_UNITS, Medium
from .data_storage.datafile import SweepDatafile
from .errors import CasimirError
from .geometry import (
    SIGN_CONVENTION,
    HalfSpaceGeometry,
    SlabPairGeometry,
    divergence_probe,
    slab_force,
    u_atom_halfspace_regularized,
)
from .logs import configure_logging
from .pair_thermal import AbsorptionModel, photon_lifetime, thermal_pair_potential
from .pair_zero_t import pair_potential, u_casimir_polder, u_london

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.16e"
NORMALIZATION = "F_normalized = F_total / |F_lifshitz|"


def columns_for(cfg: RunConfig) -> List[str]:
    axis = cfg.sweep.axis
    if cfg.geometry == "pair":
        return [axis, "non_resonant", "resonant", "total", "london", "casimir_polder"]
    if cfg.geometry == "surface":
        return ["z0" if axis == "R" else "T", "regularized", "divergence_probe"]
    abscissa = ["L", "L_over_l_ph"] if axis == "L" else ["T"]
    return abscissa + ["F_total", "F_lifshitz", "F_resonant", "F_normalized"]


def _pair_row(cfg: RunConfig, x: float) -> list:
    a, b = cfg.species_a, cfg.species_b
    thermal = cfg.sweep.axis == "T" or cfg.temperature > 0.0
    R = cfg.sweep.at if cfg.sweep.axis == "T" else x
    if thermal:
        ctx = cfg.thermal_context(x if cfg.sweep.axis == "T" else None)
        # only the resonant term is damped
        if cfg.absorbing and cfg.state.resonant_active:
            absorption = photon_lifetime(Medium(b, cfg.density_b), allow_transparent=True)
        else:
            absorption = AbsorptionModel.transparent()
        u = thermal_pair_potential(a, b, R, ctx, absorption, cfg.state)
    else:
        u = pair_potential(a, b, R, cfg.state)
    return [x, u.non_resonant, u.resonant, u.total, u_london(a, b, R), u_casimir_polder(a, b, R)]


def _surface_row(cfg: RunConfig, x: float) -> list:
    z0 = cfg.sweep.at if cfg.sweep.axis == "T" else x
    ctx = cfg.thermal_context(x if cfg.sweep.axis == "T" else None)
    geom = HalfSpaceGeometry(z0, Medium(cfg.species_b, cfg.density_b))
    regularized = u_atom_halfspace_regularized(geom, cfg.species_a, ctx, cfg.state)
    if cfg.state.resonant_active:
        probe = divergence_probe(geom, cfg.species_a, cfg.cutoff_ratio * z0)
    else:
        probe = 0.0
    return [x, regularized, probe]


def slab_geometry(cfg: RunConfig, L: float) -> SlabPairGeometry:
    l_ph_a = cfg.l_ph_a if cfg.l_ph_a is not None else cfg.l_ph
    l_ph_b = cfg.l_ph_b if cfg.l_ph_b is not None else cfg.l_ph
    return SlabPairGeometry(
        L,
        Medium(cfg.species_a, cfg.density_a),
        Medium(cfg.species_b, cfg.density_b),
        l_ph_a,
        l_ph_b,
    )


def _slab_row(cfg: RunConfig, x: float) -> list:
    if cfg.sweep.axis == "T":
        geom = slab_geometry(cfg, cfg.sweep.at)
        ctx = cfg.thermal_context(x)
    else:
        # the abscissa may be given in units of medium A's L_ph
        unit = slab_geometry(cfg, 1.0).thickness_a
        geom = slab_geometry(cfg, x * unit if cfg.sweep.in_l_ph else x)
        ctx = cfg.thermal_context()
    f = slab_force(geom, ctx, cfg.state, cfg.lifshitz_variant)
    abscissa = [x] if cfg.sweep.axis == "T" else [geom.L, geom.L / geom.thickness_a]
    return abscissa + [f.total, f.lifshitz, f.resonant_correction, f.normalized]


_ROWS = {"pair": _pair_row, "surface": _surface_row, "slab": _slab_row}


def eval_point(cfg: RunConfig, x: float) -> Dict[str, float]:
    """Evaluate one abscissa; errors propagate."""
    return dict(zip(columns_for(cfg), _ROWS[cfg.geometry](cfg, float(x))))


def _safe_row(cfg: RunConfig, x: float) -> list:
    width = len(columns_for(cfg))
    try:
        return _ROWS[cfg.geometry](cfg, float(x)) + [""]
    except CasimirError as exc:
        logger.warning("%s sweep failed at %s=%r: %s", cfg.geometry, cfg.sweep.axis, x, exc)
        return [float(x)] + [math.nan] * (width - 1) + [f"{type(exc).__name__}: {exc}"]


@dataclass
class SweepResult:
    metadata: Dict[str, Any]
    columns: List[str]
    rows: List[list] = field(default_factory=list)

    @property
    def failures(self) -> List[list]:
        return [row for row in self.rows if row[-1]]

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.columns)


def _metadata(cfg: RunConfig) -> Dict[str, Any]:
    meta = {
        "library_version": __version__,
        "unit_system": NATURAL_UNITS.describe(),
    }
    meta.update(cfg.to_metadata())
    if cfg.geometry == "slab":
        geom = slab_geometry(cfg, 1.0)
        try:
            meta["l_ph_a_effective"] = geom.thickness_a
            meta["l_ph_b_effective"] = geom.thickness_b
        except CasimirError as exc:
            meta["l_ph_effective"] = f"unavailable ({exc})"
        meta["sign_convention"] = SIGN_CONVENTION
        meta["normalization"] = NORMALIZATION
    elif cfg.geometry == "surface":
        meta["divergence_cutoff"] = "cutoff_ratio * z0"
    return meta


def run(cfg: RunConfig, log_level: Optional[int] = None) -> SweepResult:
    """Evaluate every abscissa of ``cfg.sweep``; rows keep abscissa order."""
    xs = cfg.sweep.abscissae()
    logger.info("%s sweep over %s: %d points", cfg.geometry, cfg.sweep.axis, len(xs))
    worker = partial(_safe_row, cfg)
    if cfg.workers > 1:
        level = log_level if log_level is not None else logging.getLogger("casimir_media").level
        with Pool(cfg.workers, initializer=configure_logging, initargs=(level,)) as pool:
            rows = pool.map(worker, [float(x) for x in xs])
    else:
        rows = [worker(float(x)) for x in xs]
    result = SweepResult(_metadata(cfg), columns_for(cfg) + ["error"], rows)
    logger.info("%s sweep done, %d failed rows", cfg.geometry, len(result.failures))
    return result


@contextmanager
def _opened(target: Union[str, Path, TextIO]):
    if hasattr(target, "write"):
        with nullcontext(target) as f:
            yield f
    else:
        with open(target, "w", encoding="utf-8", newline="") as f:
            yield f


def _header_value(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(result: SweepResult, path: Union[str, Path, TextIO]):
    with _opened(path) as f:
        for key, value in result.metadata.items():
            f.write(f"# {key} = {_header_value(value)}\n")
        result.to_dataframe().to_csv(
            f, index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n"
        )


def _json_value(value: Any) -> Any:
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def write_json(result: SweepResult, path: Union[str, Path, TextIO]):
    payload = {
        "metadata": {k: _json_value(v) for k, v in result.metadata.items()},
        "columns": result.columns,
        "rows": [[_json_value(v) for v in row] for row in result.rows],
    }
    with _opened(path) as f:
        json.dump(payload, f, indent=2, allow_nan=False)
        f.write("\n")


def write_result(result: SweepResult, path: Union[str, Path, TextIO], fmt: str = "csv") -> bool:
    """Write in one of csv, json, hdf5; False if the HDF5 archive could not be written."""
    if fmt == "csv":
        write_csv(result, path)
    elif fmt == "json":
        write_json(result, path)
    elif fmt == "hdf5":
        if not SweepDatafile(path).save_sweep(result):
            return False
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    logger.info("wrote %d rows to %s (%s)", len(result.rows), path, fmt)
    return True
