"""End-to-end CLI tests via click's runner."""

from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from qlanroute.cli import main
from qlanroute.graph import complement_graph, graph_from_json
from qlanroute.scenario import load_bundled_scenario, scenario_graph


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, [str(a) for a in args])


def write_scenario(tmp_path, name="sc.json", **overrides):
    data = {
        "qlan1": 2, "qlan2": 2,
        "inter_links": [["1.1", "2.1"], ["1.2", "2.2"]],
        "physical_links": [["1.1", "2.1"], ["2.1", "1.2"], ["1.2", "2.2"]],
        "requests": [["1.1", "2.2"], ["1.2", "2.1"]],
        "case": "I",
        "seed": 4,
    }
    data.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


# -- complement ------------------------------------------------------------


def test_complement_fig2_matches_declarative_reference(runner, tmp_path):
    result = invoke(runner, "complement", "--scenario", "fig2", "--out", tmp_path)
    assert result.exit_code == 0, result.output
    produced = graph_from_json(json.loads((tmp_path / "result_graph.json").read_text()))
    reference = complement_graph(scenario_graph(load_bundled_scenario("fig2")))
    assert produced == reference
    trace = json.loads((tmp_path / "trace.json").read_text())
    assert [t["measured"] for t in trace] == ["s2", "s1"]
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["measurements"] == 2
    assert summary["matches_declarative_complement"] is True


def test_complement_rejects_empty_qlan(runner, tmp_path):
    path = write_scenario(tmp_path, qlan1=0, inter_links=[], physical_links=[], requests=[])
    result = invoke(runner, "complement", "--scenario", path, "--out", tmp_path / "out")
    assert result.exit_code == 1
    err = json.loads(result.stderr.strip().splitlines()[-1])
    assert err["error"]["kind"] == "validation"
    assert "empty QLAN" in err["error"]["message"]


def test_complement_dot_export_is_well_formed(runner, tmp_path):
    result = invoke(runner, "complement", "--scenario", "fig1", "--out", tmp_path,
                    "--format", "dot")
    assert result.exit_code == 0
    dot = (tmp_path / "result_graph.dot").read_text()
    assert dot.startswith("graph ") and dot.rstrip().endswith("}")
    assert '"1.1"' in dot and '"2.1"' in dot
    pydot = pytest.importorskip("pydot", reason="structural checks above cover the contract")
    parsed = pydot.graph_from_dot_data(dot)
    assert parsed


def test_complement_with_oracle_flag(runner, tmp_path):
    result = invoke(runner, "complement", "--scenario", "exhaustive_small",
                    "--out", tmp_path, "--oracle")
    assert result.exit_code == 0
    report = json.loads((tmp_path / "verification.json").read_text())
    assert report["passed"] is True


def test_complement_retain_override_changes_result(runner, tmp_path):
    result = invoke(runner, "complement", "--scenario", "fig1", "--out", tmp_path,
                    "--retain", "1.2")
    assert result.exit_code == 0, result.output
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["retained"] == ["1.2"]
    assert summary["matches_declarative_complement"] is None


def test_complement_k0_override(runner, tmp_path):
    result = invoke(runner, "complement", "--scenario", "fig2", "--out", tmp_path,
                    "--k0", "1.2")
    assert result.exit_code == 0
    assert json.loads((tmp_path / "summary.json").read_text())["k0"] == "1.2"


def test_complement_missing_scenario_file(runner, tmp_path):
    result = invoke(runner, "complement", "--scenario", tmp_path / "none.json",
                    "--out", tmp_path)
    assert result.exit_code == 1
    assert "does not exist" in result.stderr


# -- verify ------------------------------------------------------------------


def test_verify_passes_on_small_scenario(runner, tmp_path):
    result = invoke(runner, "verify", "--scenario", "exhaustive_small", "--out", tmp_path)
    assert result.exit_code == 0, result.output
    report = json.loads((tmp_path / "verification.json").read_text())
    assert report["passed"] is True
    assert len(report["branches"]) == 4
    assert all(b["fidelity"] == pytest.approx(1.0, abs=1e-9) for b in report["branches"])


def test_verify_corrupt_negative_control(runner, tmp_path):
    result = invoke(runner, "verify", "--scenario", "exhaustive_small", "--out", tmp_path,
                    "--corrupt")
    assert result.exit_code == 1
    report = json.loads((tmp_path / "verification.json").read_text())
    assert report["passed"] is False
    assert min(b["fidelity"] for b in report["branches"]) <= 0.5 + 1e-9
    err = json.loads(result.stderr.strip().splitlines()[-1])
    assert err["error"]["kind"] == "verification_failed"


def test_verify_capacity_exit_code(runner, tmp_path):
    path = write_scenario(
        tmp_path, qlan1=7, qlan2=7, inter_links=[["1.1", "2.1"]],
        physical_links=[], requests=[],
    )
    result = invoke(runner, "verify", "--scenario", path, "--out", tmp_path / "out")
    assert result.exit_code == 2
    err = json.loads(result.stderr.strip().splitlines()[-1])
    assert err["error"]["kind"] == "capacity"
    assert "smaller" in err["error"]["message"]


def test_verify_normalize_blanks_wall_time(runner, tmp_path):
    result = invoke(runner, "verify", "--scenario", "exhaustive_small", "--out", tmp_path,
                    "--normalize")
    assert result.exit_code == 0
    assert json.loads((tmp_path / "verification.json").read_text())["wall_time_s"] is None


# -- compare -------------------------------------------------------------------


def test_compare_fig1_shows_the_parallel_service_gap(runner, tmp_path):
    result = invoke(runner, "compare", "--scenario", "fig1", "--out", tmp_path)
    assert result.exit_code == 0, result.output
    report = json.loads((tmp_path / "comparison.json").read_text())
    assert report["complement"]["rounds"] == 1
    assert report["tqr"]["rounds"] >= 2
    assert report["complement"]["measurement_count"] == 2
    assert "proactive" in result.output and "reactive" in result.output


def test_compare_csv_artifact(runner, tmp_path):
    result = invoke(runner, "compare", "--scenario", "fig1", "--out", tmp_path,
                    "--format", "csv")
    assert result.exit_code == 0
    lines = (tmp_path / "comparison.csv").read_text().splitlines()
    assert lines[0].startswith("index,seed,n1,n2")
    assert len(lines) == 2


# -- sweep ----------------------------------------------------------------------


def test_sweep_is_byte_deterministic(runner, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        result = invoke(runner, "sweep", "--count", 6, "--seed", 99, "--out", out,
                        "--normalize")
        assert result.exit_code == 0, result.output
    assert (a / "sweep.csv").read_bytes() == (b / "sweep.csv").read_bytes()
    assert (a / "sweep.json").read_bytes() == (b / "sweep.json").read_bytes()


def test_sweep_rows_hold_the_constant_cost_invariant(runner, tmp_path):
    result = invoke(runner, "sweep", "--count", 10, "--seed", 3, "--out", tmp_path)
    assert result.exit_code == 0
    rows = (tmp_path / "sweep.csv").read_text().splitlines()[1:]
    assert len(rows) == 10
    for row in rows:
        cols = row.split(",")
        assert cols[10] == "1"  # complement_rounds
        assert cols[11] == "2"  # complement_measurements
    assert "constant at 1 round / 2 measurements: True" in result.output


def test_sweep_rejects_bad_count(runner, tmp_path):
    result = invoke(runner, "sweep", "--count", 0, "--out", tmp_path)
    assert result.exit_code == 1


# -- bundled scenarios --------------------------------------------------------


def test_every_bundled_scenario_runs_end_to_end_quickly(runner, tmp_path):
    import time

    from qlanroute.scenario import bundled_scenario_names, load_bundled_scenario

    t0 = time.perf_counter()
    for name in bundled_scenario_names():
        out = tmp_path / name
        assert invoke(runner, "complement", "--scenario", name, "--out", out).exit_code == 0
        assert invoke(runner, "compare", "--scenario", name, "--out", out).exit_code == 0
        sc = load_bundled_scenario(name)
        if sc.n1 + sc.n2 + 2 <= 14:
            assert invoke(runner, "verify", "--scenario", name, "--out", out).exit_code == 0
    assert time.perf_counter() - t0 < 60
