import json
from pathlib import Path

import numpy as np
import pytest

import statecomp.comparison
import statecomp.symmetry
from statecomp import Operator
from statecomp.cli import (
    EXIT_BAD_INPUT,
    EXIT_DEGENERATE,
    EXIT_OK,
    EXIT_SELF_CHECK,
    EXIT_VERIFICATION_FAILED,
    load_scenario,
    main,
    render,
)
from statecomp.sampling import MonteCarloEstimate

TRINE_FILE = str(Path(__file__).resolve().parent.parent / "scenarios" / "trine.json")


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- dims ----------------------------------------------------------------------

def test_dims_four_qubits_json(capsys):
    code, out, _ = run_cli(capsys, "dims", "--n", "4", "--d", "2", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert [row["dimension"] for row in report["rows"]] == [5, 9, 2]
    assert [row["max_identical"] for row in report["rows"]] == [4, 3, 2]
    assert report["total_dimension"] == report["full_space_dimension"] == 16


def test_dims_includes_the_all_different_line(capsys):
    code, out, _ = run_cli(capsys, "dims", "--n", "3", "--d", "3", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert {"partition": "(1,1,1)", "dimension": 1, "max_identical": 1} in report["rows"]


def test_dims_single_system(capsys):
    code, out, _ = run_cli(capsys, "dims", "--n", "1", "--d", "5", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["rows"] == [{"partition": "(1)", "dimension": 5, "max_identical": 1}]


def test_dims_cap_exceeded(capsys):
    code, _, err = run_cli(capsys, "dims", "--n", "20", "--d", "2")
    assert code == EXIT_BAD_INPUT
    assert "cap" in err


def test_dims_csv_has_header_and_rows(capsys):
    code, out, _ = run_cli(capsys, "dims", "--n", "3", "--d", "2", "--format", "csv")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "key,value"
    assert any("rows.0.dimension,4" == line for line in lines)


# --- universal -------------------------------------------------------------------

def test_universal_reports_analytic_and_mc(capsys):
    code, out, _ = run_cli(capsys, "universal", "--n", "2", "--d", "2",
                           "--trials", "4000", "--seed", "7", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["analytic"] == 0.25
    assert abs(report["mc_estimate"] - 0.25) < 5 * report["std_error"]


def test_universal_is_deterministic(capsys):
    _, first, _ = run_cli(capsys, "universal", "--n", "2", "--d", "2",
                          "--trials", "2000", "--seed", "11", "--format", "json")
    _, second, _ = run_cli(capsys, "universal", "--n", "2", "--d", "2",
                           "--trials", "2000", "--seed", "11", "--format", "json")
    assert first == second


def test_universal_self_check_failure_exits_3(capsys, monkeypatch):
    monkeypatch.setattr(
        statecomp.comparison, "success_probability_mc",
        lambda *a, **k: MonteCarloEstimate(0.9, 1e-9),
    )
    code, _, err = run_cli(capsys, "universal", "--n", "2", "--d", "2", "--trials", "100")
    assert code == EXIT_SELF_CHECK
    assert "self-check" in err


# --- discriminate -----------------------------------------------------------------

def test_discriminate_builtin_trine(capsys):
    code, out, _ = run_cli(capsys, "discriminate", "--trials", "4000", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["mode"] == "helstrom"
    assert report["p_same"] == pytest.approx(1 / 3, abs=1e-12)
    assert report["p_error"] == pytest.approx(0.25, abs=1e-10)
    expected = sorted([1 / 12, -1 / 12, -1 / 12, -1 / 4], reverse=True)
    assert np.abs(np.array(report["eigenvalues"]) - expected).max() < 1e-10
    assert abs(report["empirical_error"] - 0.25) < 5 * report["empirical_std_error"]


def test_discriminate_equal_costs_match_minimum_error(capsys):
    code, out, _ = run_cli(capsys, "discriminate", "--costs", "0,0,1,1",
                           "--trials", "2000", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["mode"] == "bayes"
    assert report["bayes_cost"] == pytest.approx(0.25, abs=1e-10)


def test_discriminate_errorfree_guess_mode(capsys):
    code, out, _ = run_cli(capsys, "discriminate", "--errorfree-guess",
                           "--trials", "4000", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["mode"] == "errorfree_guess"
    assert report["guess_on_inconclusive"] == "different"
    assert report["error"] == pytest.approx(1 / 3, abs=1e-10)
    assert abs(report["empirical_error"] - 1 / 3) < 5 * report["empirical_std_error"]


def test_discriminate_reads_the_shipped_scenario(capsys):
    code, out, _ = run_cli(capsys, "discriminate", "--scenario", TRINE_FILE,
                           "--trials", "1000", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["scenario"] == TRINE_FILE
    assert report["p_error"] == pytest.approx(0.25, abs=1e-9)


def test_discriminate_malformed_scenario(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"states": [[[1, 0], [0, 0]]], "priors": [1.0]}')
    code, _, err = run_cli(capsys, "discriminate", "--scenario", str(bad))
    assert code == EXIT_BAD_INPUT
    assert "scenario" in err

    bad.write_text("not json at all")
    code, _, _ = run_cli(capsys, "discriminate", "--scenario", str(bad))
    assert code == EXIT_BAD_INPUT

    code, _, _ = run_cli(capsys, "discriminate", "--scenario", str(tmp_path / "missing.json"))
    assert code == EXIT_BAD_INPUT


def test_discriminate_degenerate_scenario(tmp_path, capsys):
    single = tmp_path / "single.json"
    single.write_text(json.dumps({
        "states": [[[1.0, 0.0], [0.0, 0.0]]],
        "priors": [1.0],
        "n_systems": 2,
    }))
    code, _, err = run_cli(capsys, "discriminate", "--scenario", str(single))
    assert code == EXIT_DEGENERATE
    assert "degenerate" in err


def test_load_scenario_normalizes_within_tolerance(tmp_path):
    path = tmp_path / "near.json"
    path.write_text(json.dumps({
        "states": [[[1.0 + 4e-10, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
        "priors": [0.5 + 1e-10, 0.5],
        "n_systems": 2,
    }))
    scenario = load_scenario(str(path))
    assert abs(np.linalg.norm(scenario.state_set[0].amplitudes) - 1.0) < 1e-15
    assert scenario.state_priors.sum() == pytest.approx(1.0, abs=1e-15)


def test_load_scenario_rejects_bad_norm(tmp_path):
    path = tmp_path / "bad_norm.json"
    path.write_text(json.dumps({
        "states": [[[0.9, 0.0], [0.0, 0.0]]],
        "priors": [1.0],
        "n_systems": 2,
    }))
    with pytest.raises(ValueError):
        load_scenario(str(path))


# --- multiport ----------------------------------------------------------------------

def test_multiport_two_bosons(capsys):
    code, out, _ = run_cli(capsys, "multiport", "--n", "2", "--d", "2",
                           "--trials", "4000", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["unambiguous_patterns"] == ["1,1"]
    assert report["identical_distribution"]["1,1"] < 1e-12
    assert report["analytic_bound"] == 0.25
    eff = report["efficiency"]
    assert abs(eff["estimate"] - 0.25) < 5 * eff["std_error"]


def test_multiport_four_bosons_patterns(capsys):
    code, out, _ = run_cli(capsys, "multiport", "--n", "4", "--d", "2",
                           "--trials", "200", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert "1,1,1,1" in report["unambiguous_patterns"]
    assert "3,1,0,0" in report["unambiguous_patterns"]
    assert report["unambiguous_patterns"] == sorted(report["unambiguous_patterns"])


def test_multiport_threshold_mode_lists_signatures(capsys):
    code, out, _ = run_cli(capsys, "multiport", "--n", "3", "--d", "2", "--threshold",
                           "--trials", "500", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert set(report["unambiguous_threshold_signatures"]) == {"0,1,1", "1,0,1", "1,1,0"}


def test_multiport_cap(capsys):
    code, _, err = run_cli(capsys, "multiport", "--n", "7", "--d", "2", "--trials", "10")
    assert code == EXIT_BAD_INPUT
    assert "cap" in err


# --- rendering -----------------------------------------------------------------------

def test_json_rendering_round_trips():
    report = {
        "n": 3,
        "p": 0.1 + 0.2,  # deliberately not exactly representable as 0.3
        "nested": {"values": [1 / 3, 2 / 7], "flag": True},
        "rows": [{"a": 1.0000000000000002}],
    }
    assert json.loads(render(report, "json")) == report


def test_text_and_csv_render_all_keys():
    report = {"a": 1, "b": {"c": [1, 2]}}
    text = render(report, "text")
    assert "a: 1" in text and "b.c: 1;2" in text
    csv_out = render(report, "csv")
    assert csv_out.splitlines()[0] == "key,value"


# --- reproduce -------------------------------------------------------------------------

def test_reproduce_subset_passes(capsys):
    code, out, _ = run_cli(capsys, "reproduce", "--only", "subspace-dims")
    assert code == EXIT_OK
    lines = [line for line in out.splitlines() if line.startswith(("PASS", "FAIL"))]
    assert len(lines) == 3
    assert all(line.startswith("PASS") for line in lines)


def test_reproduce_exit_code_matches_fail_lines(capsys):
    code, out, _ = run_cli(capsys, "reproduce", "--only", "pairwise")
    fails = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert code == (EXIT_OK if not fails else EXIT_VERIFICATION_FAILED)


def test_reproduce_is_deterministic(capsys):
    _, first, _ = run_cli(capsys, "reproduce", "--only", "three-boson")
    _, second, _ = run_cli(capsys, "reproduce", "--only", "three-boson")
    assert first == second
    assert first.splitlines()[0].startswith("PASS three-boson")


def test_reproduce_detects_a_corrupted_projector(capsys, monkeypatch):
    true_projector = statecomp.symmetry.symmetric_projector

    def corrupted(n, d):
        entries = np.array(true_projector(n, d).entries)
        entries[0, 0] += 1e-3
        return Operator(entries)

    monkeypatch.setattr(statecomp.symmetry, "symmetric_projector", corrupted)
    code, out, _ = run_cli(capsys, "reproduce", "--only", "symmetrizer")
    assert code == EXIT_VERIFICATION_FAILED
    assert any(line.startswith("FAIL") for line in out.splitlines())
