"""Run configuration: YAML file -> validated ``RunConfig``.

Every key is checked against the schema below; unknown keys, wrong types and invalid
physical values raise ConfigError naming the dotted key and, where the YAML parser
knows it, the line.

    geometry: pair | surface | slab
    species_a: {omega, d2, gamma}
    species_b: {omega, d2, gamma}
    density_a, density_b, temperature
    excited: none | A
    absorbing, l_ph, l_ph_a, l_ph_b, cutoff_ratio, lifshitz_variant
    matsubara: {n_max, tail_tol}
    sweep: {axis, min, max, points, spacing, in_l_ph, at}
    output: {format, path}
    workers
"""

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import yaml

from .core import AtomSpecies, Excitation, PairState, make_species, require_positive
from .errors import ConfigError, DomainError
from .geometry import LifshitzVariant
from .pair_thermal import ThermalContext

logger = logging.getLogger(__name__)

GEOMETRIES = ("pair", "surface", "slab")
AXES = {"pair": ("R", "T"), "surface": ("R", "T"), "slab": ("L", "T")}
FORMATS = ("csv", "json", "hdf5")

_SPECIES_KEYS = {"omega": float, "d2": float, "gamma": float}
_SCHEMA = {
    "geometry": str,
    "species_a": _SPECIES_KEYS,
    "species_b": _SPECIES_KEYS,
    "density_a": float,
    "density_b": float,
    "temperature": float,
    "excited": str,
    "absorbing": bool,
    "l_ph": float,
    "l_ph_a": float,
    "l_ph_b": float,
    "cutoff_ratio": float,
    "lifshitz_variant": str,
    "matsubara": {"n_max": int, "tail_tol": float},
    "sweep": {
        "axis": str,
        "min": float,
        "max": float,
        "points": int,
        "spacing": str,
        "in_l_ph": bool,
        "at": float,
    },
    "output": {"format": str, "path": str},
    "workers": int,
}
_REQUIRED = ("geometry", "species_a", "species_b")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    min: Optional[float] = None
    max: Optional[float] = None
    points: Optional[int] = None
    spacing: str = "log"
    in_l_ph: bool = False
    at: Optional[float] = None

    @property
    def has_range(self) -> bool:
        return self.min is not None and self.max is not None and self.points is not None

    def abscissae(self) -> np.ndarray:
        if not self.has_range:
            raise ConfigError("sweep needs min, max and points", field="sweep")
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: Optional[str] = None


@dataclass(frozen=True)
class RunConfig:
    geometry: str
    species_a: AtomSpecies
    species_b: AtomSpecies
    sweep: SweepSpec
    density_a: float = 1e-3
    density_b: float = 1e-3
    temperature: float = 0.0
    excited: Excitation = Excitation.ATOM_A
    absorbing: bool = True
    l_ph: Optional[float] = None
    l_ph_a: Optional[float] = None
    l_ph_b: Optional[float] = None
    cutoff_ratio: float = 1e3
    lifshitz_variant: LifshitzVariant = LifshitzVariant.AS_PRINTED_TAN
    n_max: int = 200_000
    tail_tol: float = 1e-12
    output: OutputSpec = field(default_factory=OutputSpec)
    workers: int = 1

    @property
    def state(self) -> PairState:
        return PairState(self.excited)

    def thermal_context(self, T: Optional[float] = None) -> ThermalContext:
        return ThermalContext(self.temperature if T is None else T, self.n_max, self.tail_tol)

    def to_metadata(self) -> Dict[str, Any]:
        """Flat ``dotted.key -> value`` echo of every setting, defaults included."""
        meta = {
            "geometry": self.geometry,
            "species_a.omega": self.species_a.omega,
            "species_a.d2": self.species_a.d2,
            "species_a.gamma": self.species_a.gamma,
            "species_b.omega": self.species_b.omega,
            "species_b.d2": self.species_b.d2,
            "species_b.gamma": self.species_b.gamma,
            "density_a": self.density_a,
            "density_b": self.density_b,
            "temperature": self.temperature,
            "excited": self.excited.value,
            "absorbing": self.absorbing,
            "l_ph": self.l_ph,
            "l_ph_a": self.l_ph_a,
            "l_ph_b": self.l_ph_b,
            "cutoff_ratio": self.cutoff_ratio,
            "lifshitz_variant": self.lifshitz_variant.value,
            "matsubara.n_max": self.n_max,
            "matsubara.tail_tol": self.tail_tol,
        }
        for key, value in asdict(self.sweep).items():
            meta[f"sweep.{key}"] = value
        meta["output.format"] = self.output.format
        return meta

    def with_overrides(
        self,
        out: Optional[str] = None,
        fmt: Optional[str] = None,
        variant: Optional[str] = None,
        workers: Optional[int] = None,
    ) -> "RunConfig":
        cfg = self
        if out is not None or fmt is not None:
            fmt = self.output.format if fmt is None else _choice("output.format", fmt, FORMATS)
            cfg = replace(cfg, output=OutputSpec(fmt, self.output.path if out is None else out))
        if variant is not None:
            cfg = replace(cfg, lifshitz_variant=_variant(variant))
        if workers is not None:
            if workers < 1:
                raise ConfigError(f"workers must be >= 1, got {workers}", field="workers")
            cfg = replace(cfg, workers=workers)
        return cfg


def _line_index(node: yaml.Node, prefix: str = "", index: Optional[dict] = None) -> dict:
    """Map dotted key paths to 1-based line numbers from a composed YAML node tree."""
    if index is None:
        index = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = f"{prefix}{key_node.value}"
            index[path] = key_node.start_mark.line + 1
            _line_index(value_node, path + ".", index)
    return index


def _choice(name: str, value: Any, allowed, line: Optional[int] = None) -> str:
    if value not in allowed:
        raise ConfigError(f"must be one of {', '.join(allowed)}, got {value!r}", name, line)
    return value


def _variant(value: str, line: Optional[int] = None) -> LifshitzVariant:
    try:
        return LifshitzVariant(value)
    except ValueError:
        raise ConfigError(
            f"must be tan or tanh, got {value!r}", "lifshitz_variant", line
        ) from None


class _Reader:
    """Schema-checked access to the loaded mapping, with line lookup."""

    def __init__(self, data: dict, lines: dict):
        self.data = data
        self.lines = lines
        self._check(data, _SCHEMA, "")

    def line(self, path: str) -> Optional[int]:
        return self.lines.get(path)

    def error(self, message: str, path: str) -> ConfigError:
        return ConfigError(message, path, self.line(path))

    def _check(self, data: Any, schema: dict, prefix: str):
        if not isinstance(data, dict):
            where = prefix.rstrip(".") or None
            raise ConfigError("expected a mapping", where, self.line(where) if where else None)
        for key, value in data.items():
            path = f"{prefix}{key}"
            if key not in schema:
                raise self.error("unknown key", path)
            expected = schema[key]
            if isinstance(expected, dict):
                if value is not None:
                    self._check(value, expected, path + ".")
            elif value is not None:
                self._coerce(value, expected, path)

    def _coerce(self, value: Any, kind: type, path: str):
        if kind is bool:
            if not isinstance(value, bool):
                raise self.error(f"expected true/false, got {value!r}", path)
            return value
        if isinstance(value, bool):
            raise self.error(f"expected {kind.__name__}, got {value!r}", path)
        if kind is int:
            if isinstance(value, float) and value.is_integer():
                value = int(value)
            if not isinstance(value, int):
                raise self.error(f"expected an integer, got {value!r}", path)
            return value
        if kind is float:
            if isinstance(value, str):
                try:
                    value = float(value)
                except ValueError:
                    raise self.error(f"expected a number, got {value!r}", path) from None
            if not isinstance(value, (int, float)):
                raise self.error(f"expected a number, got {value!r}", path)
            return float(value)
        if not isinstance(value, str):
            raise self.error(f"expected a string, got {value!r}", path)
        return value

    def get(self, path: str, default: Any = None) -> Any:
        node: Any = self.data
        schema: Any = _SCHEMA
        for part in path.split("."):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
            schema = schema[part]
        if node is None:
            return default
        return self._coerce(node, schema, path)

    def positive(self, path: str, default: Any = None) -> Optional[float]:
        value = self.get(path, default)
        if value is None:
            return None
        try:
            return require_positive(path, value)
        except DomainError as exc:
            raise self.error(str(exc), path) from None


def _species(reader: _Reader, name: str) -> AtomSpecies:
    if not isinstance(reader.data.get(name), dict) or "omega" not in reader.data[name]:
        raise reader.error("species needs at least omega and d2", name)
    omega = reader.get(f"{name}.omega")
    d2 = reader.get(f"{name}.d2")
    if d2 is None:
        raise reader.error("missing d2", name)
    try:
        return make_species(omega, d2, reader.get(f"{name}.gamma", 0.0))
    except DomainError as exc:
        raise reader.error(str(exc), name) from None


def _sweep(reader: _Reader, geometry: str) -> SweepSpec:
    axis = reader.get("sweep.axis", AXES[geometry][0])
    _choice("sweep.axis", axis, AXES[geometry], reader.line("sweep.axis"))
    spacing = reader.get("sweep.spacing", "linear" if axis == "T" else "log")
    _choice("sweep.spacing", spacing, ("linear", "log"), reader.line("sweep.spacing"))
    lo = reader.get("sweep.min")
    hi = reader.get("sweep.max")
    points = reader.get("sweep.points")
    given = [v is not None for v in (lo, hi, points)]
    if any(given) and not all(given):
        raise reader.error("sweep needs min, max and points together", "sweep")
    if all(given):
        if points < 2:
            raise reader.error(f"points must be >= 2, got {points}", "sweep.points")
        if not lo < hi:
            raise reader.error(f"min must be < max, got {lo} >= {hi}", "sweep.min")
        if axis != "T" or spacing == "log":
            if lo <= 0.0:
                raise reader.error(f"must be > 0, got {lo}", "sweep.min")
        elif lo < 0.0:
            raise reader.error(f"temperature must be >= 0, got {lo}", "sweep.min")
    at = reader.positive("sweep.at")
    if axis == "T" and at is None:
        raise reader.error("a temperature sweep needs a fixed distance 'at'", "sweep.at")
    in_l_ph = reader.get("sweep.in_l_ph", False)
    if in_l_ph and geometry != "slab":
        raise reader.error("in_l_ph applies to slab runs only", "sweep.in_l_ph")
    return SweepSpec(axis, lo, hi, points, spacing, in_l_ph, at)


def parse_config(data: Any, lines: Optional[dict] = None) -> RunConfig:
    """Validate an already loaded mapping."""
    if data is None:
        raise ConfigError("empty configuration")
    reader = _Reader(data, lines or {})
    for key in _REQUIRED:
        if key not in data:
            raise ConfigError("required key missing", key)
    geometry = _choice("geometry", reader.get("geometry"), GEOMETRIES, reader.line("geometry"))
    species_a = _species(reader, "species_a")
    species_b = _species(reader, "species_b")
    temperature = reader.get("temperature", 0.0)
    if not math.isfinite(temperature) or temperature < 0.0:
        raise reader.error(f"must be finite and >= 0, got {temperature}", "temperature")
    excited = reader.get("excited", "A")
    try:
        excited = Excitation(excited)
    except ValueError:
        raise reader.error(f"must be none or A, got {excited!r}", "excited") from None
    variant = _variant(reader.get("lifshitz_variant", "tan"), reader.line("lifshitz_variant"))
    n_max = reader.get("matsubara.n_max", 200_000)
    tail_tol = reader.get("matsubara.tail_tol", 1e-12)
    try:
        ThermalContext(temperature, n_max, tail_tol)
    except DomainError as exc:
        raise reader.error(str(exc), "matsubara") from None
    sweep = _sweep(reader, geometry)
    if geometry == "slab" and sweep.axis != "T" and temperature == 0.0:
        raise reader.error("slab forces need temperature > 0", "temperature")
    if geometry == "slab" and sweep.axis == "T" and sweep.has_range and sweep.min <= 0.0:
        raise reader.error("slab forces need temperature > 0", "sweep.min")
    thermal = temperature > 0.0 or sweep.axis == "T"
    absorbing = reader.get("absorbing", True)
    if (
        geometry == "pair"
        and thermal
        and absorbing
        and excited is Excitation.ATOM_A
        and species_b.d2 > 0.0
        and species_b.gamma == 0.0
    ):
        # the damped resonant term takes its photon lifetime from species B
        raise ConfigError(
            "an absorbing thermal pair run needs species_b.gamma > 0 (or absorbing: false)",
            "species_b.gamma",
            reader.line("species_b.gamma") or reader.line("species_b"),
        )
    fmt = _choice("output.format", reader.get("output.format", "csv"), FORMATS,
                  reader.line("output.format"))
    workers = reader.get("workers", 1)
    if workers < 1:
        raise reader.error(f"must be >= 1, got {workers}", "workers")
    return RunConfig(
        geometry=geometry,
        species_a=species_a,
        species_b=species_b,
        sweep=sweep,
        density_a=reader.positive("density_a", 1e-3),
        density_b=reader.positive("density_b", 1e-3),
        temperature=temperature,
        excited=excited,
        absorbing=absorbing,
        l_ph=reader.positive("l_ph"),
        l_ph_a=reader.positive("l_ph_a"),
        l_ph_b=reader.positive("l_ph_b"),
        cutoff_ratio=reader.positive("cutoff_ratio", 1e3),
        lifshitz_variant=variant,
        n_max=n_max,
        tail_tol=tail_tol,
        output=OutputSpec(fmt, reader.get("output.path")),
        workers=workers,
    )


def load_config(path: Union[str, Path]) -> RunConfig:
    """Read and validate a YAML run configuration.

    Raises:
        ConfigError: unreadable file, YAML syntax error or schema violation.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigError(f"YAML syntax error: {problem}", line=line) from None
    lines = _line_index(node) if node is not None else {}
    cfg = parse_config(data, lines)
    logger.info("loaded %s run configuration from %s", cfg.geometry, path)
    return cfg
