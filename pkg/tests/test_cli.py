import csv
import json

import pytest

from pshlab.cli import format_cell, list_scenarios, main
from pshlab.config import ExperimentConfig, load_config, parse_config
from pshlab.errors import ConfigError
from pshlab.geometry import CompactSetSpec
from pshlab.scenarios import SCENARIOS, pmap


def write(tmp_path, text, name="run.toml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == len(SCENARIOS)
    names = [ln.split(":")[0] for ln in lines]
    assert names == list(SCENARIOS)
    assert "conjecture-scan" in names and "claims" in names
    assert list_scenarios().count("\n") == len(SCENARIOS) - 1


def test_parse_defaults_and_sets():
    cfg = parse_config({"scenario": "capacity", "a": 3,
                        "sets": [{"kind": "disk", "center": [0, 0], "radius": 0.5, "expect_gamma": 0.5}]},
                       SCENARIOS)
    assert cfg.resolution == 256 and cfg.a == 3.0
    assert cfg.sets == (CompactSetSpec.disk(0, 0.5),)
    assert cfg.expect == ({"gamma": 0.5},)
    assert cfg.with_overrides(seed=4, out=None).seed == 4


@pytest.mark.parametrize("raw,field", [
    ({"scenario": "nope"}, "scenario"),
    ({}, "scenario"),
    ({"scenario": "capacity", "resolution": "x"}, "resolution"),
    ({"scenario": "capacity", "resolution": 8}, "resolution"),
    ({"scenario": "capacity", "a": 0.5}, "a"),
    ({"scenario": "capacity", "colour": 1}, "colour"),
    ({"scenario": "capacity", "corpus": {"size": 3}}, "corpus"),
    ({"scenario": "capacity", "sets": [{"kind": "blob"}]}, "sets[0]"),
])
def test_config_errors_name_the_field(raw, field):
    with pytest.raises(ConfigError) as exc:
        parse_config(raw, SCENARIOS)
    assert exc.value.field == field
    assert str(exc.value).startswith(field)


def test_toml_syntax_error_has_position(tmp_path):
    p = write(tmp_path, 'scenario = "capacity"\nresolution = = 3\n')
    with pytest.raises(ConfigError) as exc:
        load_config(p, SCENARIOS)
    assert "line 2" in str(exc.value)


@pytest.mark.parametrize("argv", [["run"], ["frobnicate"], []])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_unknown_scenario_exit_code(tmp_path):
    assert main(["run", "--config", str(write(tmp_path, 'scenario = "nope"\n'))]) == 2
    assert main(["run", "--config", str(tmp_path / "missing.toml")]) == 2


def test_capacity_run_writes_reports(tmp_path):
    cfg = write(tmp_path, 'scenario = "capacity"\nresolution = 128\n'
                '[[sets]]\nkind = "disk"\ncenter = [0.0, 0.0]\nradius = 0.5\nexpect_gamma = 0.5\n')
    out = str(tmp_path / "cap")
    assert main(["run", "--config", str(cfg), "--out", out]) == 0
    rows = read_csv(out + ".csv")
    assert rows[0][:3] == ["scenario", "set", "resolution"]
    row = dict(zip(rows[0], rows[1]))
    assert float(row["gamma"]) == pytest.approx(0.5, rel=0.01)
    summary = json.loads(open(out + ".summary.json").read())
    assert summary["passed"] and summary["undocumented_columns"] == []
    assert "timestamp_utc" in summary


def test_hard_failure_exit_code(tmp_path):
    cfg = write(tmp_path, 'scenario = "capacity"\nresolution = 64\n'
                '[[sets]]\nkind = "disk"\ncenter = [0.0, 0.0]\nradius = 0.5\nexpect_gamma = 0.7\n')
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "bad")]) == 1


def test_refinement_columns_and_reproducibility(tmp_path):
    cfg = write(tmp_path, 'scenario = "conjecture-scan"\nresolution = 48\nrefine = 64\n[params]\ncount = 3\n')
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    assert main(["run", "--config", str(cfg), "--out", a]) == 0
    assert main(["run", "--config", str(cfg), "--out", b, "--seed", "0"]) == 0
    assert open(a + ".csv").read() == open(b + ".csv").read()
    header = read_csv(a + ".csv")[0]
    assert "product@64" in header and "product_rel_change" in header
    summary = json.loads(open(a + ".summary.json").read())["summary"]
    assert summary["min_product"] > 0 and "min_product_rel_change" in summary
    spec = CompactSetSpec.from_dict(summary["argmin"])
    assert spec.label == summary["argmin_label"]


def test_format_cell():
    assert format_cell(0.1) == "0.1"
    assert format_cell(1 / 3) == repr(1 / 3)
    assert format_cell(True) == "true" and format_cell(None) == ""
    assert format_cell(float("nan")) == "nan" and format_cell(7) == "7"


def _square(x):
    return x * x


def test_pool_map_keeps_order():
    assert pmap(_square, range(6), workers=2) == [x * x for x in range(6)]
    assert pmap(_square, range(6)) == pmap(_square, range(6), workers=3)


def test_config_roundtrip():
    cfg = ExperimentConfig("claims", sets=(CompactSetSpec.segment(-1, 1),), params={"count": 3})
    again = parse_config({k: v for k, v in cfg.to_dict().items() if v is not None}, SCENARIOS)
    assert again == cfg


def test_config_roundtrip_with_expectations():
    raw = {"scenario": "capacity", "sets": [{"kind": "disk", "center": [0.0, 0.0], "radius": 0.5,
                                             "expect_gamma": 0.5}]}
    cfg = parse_config(raw, SCENARIOS)
    assert parse_config({k: v for k, v in cfg.to_dict().items() if v is not None}, SCENARIOS) == cfg
