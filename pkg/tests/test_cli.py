"""Tests for the configuration, scenario runner and CLI plumbing."""

import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from lambdaphase.cli import (COLUMNS, PRESETS, RunConfig, config_from_dict,
                             load_config, main, run_scenario, time_scale)

BASE_CONFIG = {
    "g_a": 1.0,
    "g_b": 1.0,
    "nbar_a": 0.8,
    "nbar_b": 0.5,
    "c": [[0.6, 0.0], [0.0, 0.8], [0.0, 0.0]],
    "tau_max": 1.0,
    "tau_steps": 21,
}


def write_config(tmp_path, name="config.json", **overrides):
    raw = dict(BASE_CONFIG)
    raw.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return path


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def test_config_round_trip(tmp_path):
    config = load_config(write_config(tmp_path))
    assert config.tau_steps == 21
    assert config.c[1] == 0.8j
    params = config.system_params()
    assert params.nbar_b == 0.5


def test_config_rejects_unknown_keys(tmp_path):
    path = write_config(tmp_path, coupling=2.0)
    with pytest.raises(ValueError, match="coupling"):
        load_config(path)


def test_config_rejects_missing_required(tmp_path):
    raw = dict(BASE_CONFIG)
    del raw["c"]
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(ValueError, match="c"):
        load_config(path)


def test_config_reports_field_names():
    with pytest.raises(ValueError, match="tau_steps"):
        config_from_dict({**BASE_CONFIG, "tau_steps": 1})
    with pytest.raises(ValueError, match="tau_max"):
        config_from_dict({**BASE_CONFIG, "tau_max": -1.0})
    with pytest.raises(ValueError, match="transitions"):
        config_from_dict({**BASE_CONFIG, "transitions": ["31"]})
    with pytest.raises(ValueError, match="c\\["):
        config_from_dict({**BASE_CONFIG, "c": ["x", 0, 0]})


def test_presets_available():
    assert set(PRESETS) == {"fig2", "fig3a", "fig3b", "fig4"}
    fig4 = PRESETS["fig4"]
    assert fig4.nbar_a == fig4.nbar_b == 50.0
    # dark superposition of the two lower levels
    assert fig4.c[0] == pytest.approx(1 / math.sqrt(2))
    assert fig4.c[1] == pytest.approx(-1 / math.sqrt(2))
    for preset in PRESETS.values():
        assert preset.delta_a == preset.delta_b == 0.0
        assert preset.tau_max == 2.0


def test_time_scale():
    params = PRESETS["fig3a"].system_params()
    assert time_scale(params) == pytest.approx(2 * math.pi * math.sqrt(50.0))
    degenerate = RunConfig(**{**BASE_CONFIG, "nbar_a": 0.0,
                              "c": (0.6, 0.8j, 0.0)}).system_params()
    assert time_scale(degenerate) == 1.0


# ---------------------------------------------------------------------------
# scenario runs
# ---------------------------------------------------------------------------

def test_run_scenario_writes_csv_and_svg(tmp_path):
    config = load_config(write_config(tmp_path))
    csv_path = tmp_path / "out.csv"
    svg_path = tmp_path / "out.svg"
    data = run_scenario(config, csv_path=csv_path, svg_path=svg_path)

    lines = csv_path.read_text().splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert len(lines) == 1 + config.tau_steps
    first = dict(zip(COLUMNS, map(float, lines[1].split(","))))
    assert first["tau"] == 0.0
    assert first["norm"] == pytest.approx(1.0, abs=1e-12)

    for stem in ("p13", "p23", "p12"):
        total = data[f"{stem}_0"] + data[f"{stem}_p"] + data[f"{stem}_m"]
        assert np.allclose(total, 1.0, atol=1e-9)
    assert np.allclose(data["norm"], 1.0, atol=1e-9)
    assert np.allclose(data["p13_0"], data["pop2"], atol=1e-9)
    assert np.allclose(data["p23_0"], data["pop1"], atol=1e-9)
    assert np.allclose(data["p12_0"], data["pop3"], atol=1e-9)

    tree = ET.parse(svg_path)
    polylines = [el for el in tree.iter() if el.tag.endswith("polyline")]
    assert len(polylines) == 3 * len(config.transitions)


def test_run_scenario_deterministic(tmp_path):
    config = load_config(write_config(tmp_path))
    path_one = tmp_path / "one.csv"
    path_two = tmp_path / "two.csv"
    run_scenario(config, csv_path=path_one)
    run_scenario(config, csv_path=path_two)
    assert path_one.read_bytes() == path_two.read_bytes()


def test_run_scenario_thread_count_does_not_change_bytes(tmp_path, monkeypatch):
    config = load_config(write_config(tmp_path))
    serial = tmp_path / "serial.csv"
    threaded = tmp_path / "threaded.csv"
    run_scenario(config, csv_path=serial, workers=1)
    monkeypatch.setenv("LAMBDAPHASE_THREADS", "3")
    run_scenario(config, csv_path=threaded)
    assert serial.read_bytes() == threaded.read_bytes()


def test_run_scenario_constant_for_zero_couplings(tmp_path):
    config = config_from_dict({**BASE_CONFIG, "g_a": 0.0, "g_b": 0.0})
    data = run_scenario(config)
    for column in COLUMNS[1:]:
        assert np.max(np.abs(data[column] - data[column][0])) < 1e-12


# ---------------------------------------------------------------------------
# command line entry point
# ---------------------------------------------------------------------------

def test_main_simulate_with_config(tmp_path, capsys):
    config_path = write_config(tmp_path, csv=None)
    out_path = tmp_path / "run.csv"
    code = main(["simulate", "--config", str(config_path), "--out", str(out_path)])
    assert code == 0
    assert out_path.exists()
    assert "21 rows" in capsys.readouterr().out


def test_main_simulate_preset(tmp_path, capsys):
    out_path = tmp_path / "fig2.csv"
    svg_path = tmp_path / "fig2.svg"
    code = main(["simulate", "--preset", "fig2", "--out", str(out_path),
                 "--svg", str(svg_path)])
    assert code == 0
    assert out_path.exists() and svg_path.exists()


def test_main_rejects_bad_config(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({**BASE_CONFIG, "bogus": 1}))
    code = main(["simulate", "--config", str(path), "--out", str(tmp_path / "x.csv")])
    assert code == 2
    assert "bogus" in capsys.readouterr().err


def test_main_rejects_unwritable_output(tmp_path):
    config_path = write_config(tmp_path)
    code = main(["simulate", "--config", str(config_path),
                 "--out", str(tmp_path / "missing_dir" / "x.csv")])
    assert code == 2


def test_main_verify_algebra(capsys):
    code = main(["verify", "--suite", "algebra"])
    assert code == 0
    out = capsys.readouterr().out
    assert "[PASS]" in out and "[FAIL]" not in out


def test_main_verify_unknown_suite():
    with pytest.raises(SystemExit):
        main(["verify", "--suite", "nonsense"])
