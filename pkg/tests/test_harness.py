import csv
import json

import pytest

from nkcs_conformity import harness
from nkcs_conformity.engine import ScenarioConfig, run_experiment
from nkcs_conformity.exceptions import ConfigurationError
from nkcs_conformity.harness import (
    ScenarioMatrix,
    emit_results,
    main,
    parse_config,
    reproduce_figures,
    scenario_name,
)


def test_empty_document_gives_defaults():
    m = parse_config("")
    assert m == ScenarioMatrix()
    configs = m.expand()
    assert [c.topology for c in configs] == ["star", "ring", "cycle", "line"]
    c = configs[0]
    assert (c.M, c.P, c.N, c.rho, c.memory_span, c.periods, c.runs) == (20, 5, 4, 0.9, 50, 500, 1000)


def test_weights_must_sum_to_one():
    with pytest.raises(ConfigurationError, match="weights must sum to 1"):
        parse_config("weights: [[0.6, 0.6]]")


@pytest.mark.parametrize("doc,field", [
    ("regimes: [[4, 0, 0]]", "K"),
    ("regimes: [[1, 2]]", "regimes"),
    ("topologies: [mesh]", "topologies"),
    ("periods: ten", "periods"),
    ("rhos: [1.5]", "rho"),
    ("colour: blue", "colour"),
    ("warmup_conformity: 1", "warmup_conformity"),
])
def test_errors_name_the_field(doc, field):
    with pytest.raises(ConfigurationError) as err:
        parse_config(doc)
    assert err.value.field == field


def test_malformed_document():
    with pytest.raises(ConfigurationError):
        parse_config("a: [1, 2")
    with pytest.raises(ConfigurationError):
        parse_config("- 1\n- 2")


def test_cross_product():
    m = parse_config("topologies: [star, cycle]\nregimes: [[3,0,0],[2,2,2]]")
    configs = m.expand()
    assert len(configs) == 4
    assert {(c.topology, c.regime) for c in configs} == {
        ("star", (3, 0, 0)), ("star", (2, 2, 2)), ("cycle", (3, 0, 0)), ("cycle", (2, 2, 2))}


def test_scalar_forms():
    m = parse_config("topology: ring\nrho: 0.5\nruns: 7")
    assert m.topologies == ("ring",) and m.rhos == (0.5,) and m.runs == 7


@pytest.fixture(scope="module")
def small_results():
    m = parse_config("runs: 4\nperiods: 500\nseed: 2024\ntopologies: [ring, star]")
    return m, [run_experiment(c) for c in m.expand()]


def test_emit_results_layout(tmp_path, small_results):
    m, results = small_results
    manifest = emit_results(results, tmp_path, m, 1.0)
    name = scenario_name(results[0].config)
    rows = list(csv.reader(open(tmp_path / f"{name}.csv")))
    assert rows[0] == list(harness.CSV_COLUMNS)
    assert len(rows) == 501
    assert [r[0] for r in rows[1:4]] == ["1", "2", "3"]
    doc = json.loads(manifest.read_text())
    assert doc["tool_version"]
    assert doc["scenarios"][0]["run_seeds"] == [int(s) for s in results[0].run_seeds]
    assert len(doc["scenarios"][0]["config"]) == len(ScenarioConfig.__dataclass_fields__)


def test_emit_results_deterministic(tmp_path, small_results):
    m, results = small_results
    emit_results(results, tmp_path / "a", m)
    again = [run_experiment(c) for c in m.expand()]
    emit_results(again, tmp_path / "b", m)
    for f in (tmp_path / "a").glob("*.csv"):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_manifest_roundtrip(tmp_path):
    m = parse_config(
        "topologies: [cycle, line]\nregimes: [[2,2,2]]\nweights: [[1,0],[0.25,0.75]]\n"
        "rhos: [0.9, 0.5]\nruns: 2\nperiods: 10\nseed: 99\nwarmup_conformity: false")
    results = [run_experiment(c) for c in m.expand()]
    manifest = emit_results(results, tmp_path, m)
    assert parse_config(manifest.read_text()) == m


def test_cli_end_to_end(tmp_path, master_seed):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("runs: 3\nperiods: 80\ntopologies: [cycle]\n")
    out1, out4 = tmp_path / "w1", tmp_path / "w4"
    assert main(["--config", str(cfg), "--output", str(out1), "--workers", "1",
                 "--seed", str(master_seed)]) == 0
    assert main(["--config", str(cfg), "--output", str(out4), "--workers", "4",
                 "--seed", str(master_seed)]) == 0
    csvs = sorted(out1.glob("*.csv"))
    assert len(csvs) == 1
    assert csvs[0].read_bytes() == (out4 / csvs[0].name).read_bytes()
    doc = json.loads((out1 / "manifest.json").read_text())
    assert doc["config"]["seed"] == master_seed


def test_cli_scenario_selector(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("runs: 2\nperiods: 5\n")
    name = "line_kcs300_w0.5-0.5_rho0.9"
    assert main(["--config", str(cfg), "--output", str(tmp_path / "o"),
                 "--scenario", name]) == 0
    assert [p.stem for p in (tmp_path / "o").glob("*.csv")] == [name]
    assert main(["--config", str(cfg), "--output", str(tmp_path / "o"),
                 "--scenario", "nope"]) == 2


def test_cli_exit_codes(tmp_path, monkeypatch, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("weights: [[0.6, 0.6]]")
    assert main(["--config", str(bad), "--output", str(tmp_path / "o")]) == 2
    assert "weights must sum to 1" in capsys.readouterr().err

    good = tmp_path / "good.yaml"
    good.write_text("runs: 1\nperiods: 3\ntopologies: [star, ring]")

    def flaky(cfg, workers):
        if cfg.topology == "ring":
            raise RuntimeError("boom")
        return run_experiment(cfg, workers)

    monkeypatch.setattr(harness, "run_experiment", flaky)
    assert main(["--config", str(good), "--output", str(tmp_path / "o2")]) == 1
    assert len(list((tmp_path / "o2").glob("*.csv"))) == 1


def test_reproduce_figures_shape(tmp_path):
    m = parse_config("runs: 2\nperiods: 40\nseed: 1")
    written = reproduce_figures(m, tmp_path, workers=1)
    assert set(written) == set(harness.FIGURES)
    rows = list(csv.reader(open(written["fig5b_synchrony_external"])))
    assert rows[0] == ["period", "star", "ring", "cycle", "line"]
    assert len(rows) == 41
    assert (tmp_path / "manifest.json").exists()
