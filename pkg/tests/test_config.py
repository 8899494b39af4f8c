import math

import pytest

from qprint.cli import preset_names, preset_text
from qprint.config import BLOCKS, SCENARIO_BLOCKS, SCENARIOS, from_dict, parse_config
from qprint.errors import ParseError, ValidationError


def test_minimal_sc_run_fills_defaults():
    cfg = parse_config('scenario = "sc-run"\n')
    assert cfg.scenario == "sc-run" and cfg.seed == 0 and cfg.output_dir == "out"
    assert set(cfg.blocks) == {"beam", "grid", "tdgl"}
    assert cfg["tdgl"]["dt"] == 0.05 and cfg["grid"]["nx"] == 64
    assert cfg["beam"]["theta_pol"] == pytest.approx(math.pi / 4)


def test_every_scenario_accepts_bare_defaults():
    for s in SCENARIOS:
        cfg = from_dict({"scenario": s})
        assert tuple(cfg.blocks) == SCENARIO_BLOCKS[s]


def test_dt_above_stability_bound_names_dt():
    with pytest.raises(ValidationError) as ei:
        parse_config('scenario = "sc-run"\n[grid]\ndx = 0.5\n[tdgl]\ndt = 0.07\n')
    assert ei.value.path == "tdgl.dt"
    assert "0.0625" in str(ei.value)


def test_llg_accuracy_bound():
    with pytest.raises(ValidationError, match="llg.dt"):
        parse_config('scenario = "magnet-run"\n[llg]\ndt = 0.05\n')


def test_unknown_key_and_table_are_fatal():
    with pytest.raises(ValidationError) as ei:
        parse_config('scenario = "sc-run"\n[tdgl]\nsteps = 10\nstep = 5\n')
    assert ei.value.path == "tdgl.step"
    with pytest.raises(ValidationError) as ei:
        parse_config('scenario = "sc-run"\nsnapshots = 3\n')
    assert ei.value.path == "snapshots"
    with pytest.raises(ValidationError) as ei:
        parse_config('scenario = "sc-run"\n[llg]\ndt = 0.01\n')
    assert ei.value.path == "llg"
    with pytest.raises(ValidationError) as ei:
        parse_config('scenario = "sc-run"\n[beem]\n')
    assert ei.value.path == "beem"


def test_missing_or_bad_scenario():
    with pytest.raises(ValidationError, match="scenario: missing"):
        parse_config("seed = 1\n")
    with pytest.raises(ValidationError, match="scenario: must be one of"):
        parse_config('scenario = "fluid"\n')


@pytest.mark.parametrize(
    "body, path",
    [
        ("[tdgl]\nsteps = 1.5\n", "tdgl.steps"),
        ("[tdgl]\nsteps = -1\n", "tdgl.steps"),
        ("[tdgl]\nphase_only = 1\n", "tdgl.phase_only"),
        ("[beam]\nsigma = 2\n", "beam.sigma"),
        ("[beam]\nE0 = true\n", "beam.E0"),
        ("[beam]\ncenter = [0.0]\n", "beam.center"),
        ("[beam]\ncenter = [0.0, \"a\"]\n", "beam.center[1]"),
        ("[beam]\nenvelope = \"square\"\n", "beam.envelope"),
        ("[beam]\nenvelope = \"gaussian\"\ntau = 1.0\n", "beam.tau"),
        ("[grid]\nnx = 2\n", "grid.nx"),
        ("[grid]\ndx = inf\n", "grid.dx"),
    ],
)
def test_invalid_values_name_their_key(body, path):
    with pytest.raises(ValidationError) as ei:
        parse_config('scenario = "sc-run"\n' + body)
    assert ei.value.path == path
    assert str(ei.value).startswith(path + ": ")


def test_cross_block_checks_for_calculators():
    with pytest.raises(ValidationError, match="rydberg.n_max"):
        parse_config('scenario = "ife-rydberg"\n[rydberg]\nn_min = 20\nn_max = 10\n')
    with pytest.raises(ValidationError, match="rydberg.cutoff"):
        parse_config('scenario = "ife-rydberg"\n[rydberg]\nn_max = 20\ncutoff = 15\n')
    with pytest.raises(ValidationError, match="acoustic.valleys"):
        parse_config('scenario = "acoustic-run"\n[acoustic]\nvalleys = 3\n')
    with pytest.raises(ValidationError, match=r"acoustic.omegas\[1\]"):
        parse_config('scenario = "acoustic-run"\n[acoustic]\nomegas = [1.0, "x"]\n')


def test_parse_error_reports_line_and_column():
    with pytest.raises(ParseError) as ei:
        parse_config('scenario = "sc-run"\n[tdgl]\ndt = = 0.1\n')
    assert ei.value.line == 3 and ei.value.column is not None
    assert "line 3" in str(ei.value)


def test_integers_promote_to_floats():
    cfg = parse_config('scenario = "sc-run"\n[beam]\nE0 = 2\n')
    assert isinstance(cfg["beam"]["E0"], float)


def test_every_block_default_passes_its_own_rule():
    for name, schema in BLOCKS.items():
        for key, spec in schema.items():
            assert spec.default is not None, f"{name}.{key}"


@pytest.mark.parametrize("name", preset_names())
def test_shipped_presets_parse(name):
    cfg = parse_config(preset_text(name))
    assert cfg.scenario in SCENARIOS


def test_readme_examples_parse():
    import pathlib
    import re

    readme = pathlib.Path(__file__).resolve().parents[1] / "README.md"
    blocks = re.findall(r"```toml\n(.*?)```", readme.read_text(), re.S)
    assert blocks
    for b in blocks:
        parse_config(b)
