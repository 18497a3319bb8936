from pathlib import Path

import numpy as np
import pytest

from casimir_media.config import RunConfig, load_config, parse_config
from casimir_media.core import Excitation
from casimir_media.errors import ConfigError
from casimir_media.geometry import LifshitzVariant

CONFIGS = sorted((Path(__file__).parent.parent / "configs").glob("*.yaml"))

PAIR = """\
geometry: pair
species_a: {omega: 1.0, d2: 1.0}
species_b: {omega: 2.0, d2: 1.0}
sweep:
  axis: R
  min: 0.1
  max: 10.0
  points: 5
"""


def write(tmp_path, text, name="run.yaml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults(tmp_path):
    cfg = load_config(write(tmp_path, PAIR))
    assert isinstance(cfg, RunConfig)
    assert cfg.density_a == 1e-3 and cfg.density_b == 1e-3
    assert cfg.temperature == 0.0
    assert cfg.excited is Excitation.ATOM_A
    assert cfg.absorbing is True
    assert cfg.lifshitz_variant is LifshitzVariant.AS_PRINTED_TAN
    assert cfg.n_max == 200_000 and cfg.tail_tol == 1e-12
    assert cfg.output.format == "csv" and cfg.output.path is None
    assert cfg.sweep.spacing == "log"
    np.testing.assert_allclose(cfg.sweep.abscissae(), [0.1, 0.1 * 10**0.5, 1.0, 10**0.5, 10.0])
    assert cfg.species_a.gamma == 0.0


def test_metadata_echoes_defaults(tmp_path):
    meta = load_config(write(tmp_path, PAIR)).to_metadata()
    assert meta["geometry"] == "pair"
    assert meta["species_b.omega"] == 2.0
    assert meta["matsubara.n_max"] == 200_000
    assert meta["lifshitz_variant"] == "tan"
    assert meta["sweep.points"] == 5
    assert "output.path" not in meta


def test_unknown_key_reports_line(tmp_path):
    text = PAIR.replace("species_b:", "speciesb: {omega: 1.0}\nspecies_b:")
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, text))
    assert info.value.field == "speciesb"
    assert info.value.line == 3
    assert "line 3" in str(info.value)


def test_unknown_nested_key(tmp_path):
    text = PAIR.replace("  points: 5", "  points: 5\n  step: 2")
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, text))
    assert info.value.field == "sweep.step"
    assert info.value.line == 9


def test_yaml_syntax_error_line(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, "geometry: pair\nfoo: bar: baz\n"))
    assert info.value.line == 2
    assert "YAML" in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.yaml")


@pytest.mark.parametrize(
    "old, new, field",
    [
        ("points: 5", "points: 1", "sweep.points"),
        ("min: 0.1", "min: 20.0", "sweep.min"),
        ("min: 0.1", "min: -1.0", "sweep.min"),
        ("  points: 5\n", "", "sweep"),
        ("axis: R", "axis: L", "sweep.axis"),
        ("geometry: pair", "geometry: sphere", "geometry"),
        ("{omega: 1.0, d2: 1.0}", "{omega: -1.0, d2: 1.0}", "species_a"),
        ("{omega: 2.0, d2: 1.0}", "{omega: 2.0}", "species_b"),
        ("{omega: 1.0, d2: 1.0}", "{omega: 1.0, d2: yes}", "species_a.d2"),
    ],
)
def test_invalid_values(tmp_path, old, new, field):
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, PAIR.replace(old, new)))
    assert info.value.field == field


def test_top_level_invalid(tmp_path):
    for extra, field in [
        ("temperature: -1.0\n", "temperature"),
        ("excited: B\n", "excited"),
        ("lifshitz_variant: cot\n", "lifshitz_variant"),
        ("workers: 0\n", "workers"),
        ("density_a: 0.0\n", "density_a"),
        ("matsubara: {n_max: 0}\n", "matsubara"),
        ("output: {format: xml}\n", "output.format"),
    ]:
        with pytest.raises(ConfigError) as info:
            load_config(write(tmp_path, PAIR + extra))
        assert info.value.field == field


def test_required_keys():
    with pytest.raises(ConfigError) as info:
        parse_config({"geometry": "pair", "species_a": {"omega": 1.0, "d2": 1.0}})
    assert info.value.field == "species_b"
    with pytest.raises(ConfigError):
        parse_config(None)


def test_temperature_sweep_needs_distance(tmp_path):
    text = PAIR.replace("axis: R", "axis: T").replace("min: 0.1", "min: 0.0")
    text = text.replace("{omega: 2.0, d2: 1.0}", "{omega: 2.0, d2: 1.0, gamma: 0.1}")
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, text))
    assert info.value.field == "sweep.at"
    cfg = load_config(write(tmp_path, text + "  at: 2.0\n"))
    assert cfg.sweep.spacing == "linear"
    assert cfg.sweep.abscissae()[0] == 0.0


def test_in_l_ph_only_for_slabs(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, PAIR + "  in_l_ph: true\n"))
    assert info.value.field == "sweep.in_l_ph"


def test_slab_needs_temperature(tmp_path):
    text = PAIR.replace("geometry: pair", "geometry: slab").replace("axis: R", "axis: L")
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, text))
    assert info.value.field == "temperature"
    assert load_config(write(tmp_path, text + "temperature: 0.4\n")).temperature == 0.4


def test_overrides(tmp_path):
    cfg = load_config(write(tmp_path, PAIR))
    changed = cfg.with_overrides(out="x.json", fmt="json", variant="tanh", workers=3)
    assert changed.output.path == "x.json"
    assert changed.output.format == "json"
    assert changed.lifshitz_variant is LifshitzVariant.TANH_VARIANT
    assert changed.workers == 3
    assert cfg.with_overrides() == cfg
    with pytest.raises(ConfigError):
        cfg.with_overrides(workers=0)


def test_thermal_context(tmp_path):
    text = PAIR + "temperature: 0.3\nexcited: none\nmatsubara: {n_max: 5000}\n"
    cfg = load_config(write(tmp_path, text))
    assert cfg.thermal_context().T == 0.3
    assert cfg.thermal_context(1.5).T == 1.5
    assert cfg.thermal_context().n_max == 5000


def test_absorbing_thermal_pair_needs_linewidth(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, PAIR + "temperature: 0.5\n"))
    assert info.value.field == "species_b.gamma"
    assert info.value.line == 3
    axis_t = PAIR.replace("axis: R", "axis: T").replace("min: 0.1", "min: 0.0") + "  at: 2.0\n"
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, axis_t))
    assert info.value.field == "species_b.gamma"
    for extra in ("excited: none\n", "absorbing: false\n"):
        assert load_config(write(tmp_path, PAIR + "temperature: 0.5\n" + extra)).temperature == 0.5
    linewidth = PAIR.replace("{omega: 2.0, d2: 1.0}", "{omega: 2.0, d2: 1.0, gamma: 0.1}")
    assert load_config(write(tmp_path, linewidth + "temperature: 0.5\n")).species_b.gamma == 0.1
    dark = PAIR.replace("{omega: 2.0, d2: 1.0}", "{omega: 2.0, d2: 0.0}")
    assert load_config(write(tmp_path, dark + "temperature: 0.5\n")).species_b.d2 == 0.0
    assert load_config(write(tmp_path, PAIR)).temperature == 0.0


@pytest.mark.parametrize("path", CONFIGS, ids=lambda p: p.stem)
def test_shipped_configs_load(path):
    cfg = load_config(path)
    assert cfg.sweep.has_range
    assert len(cfg.sweep.abscissae()) == cfg.sweep.points
