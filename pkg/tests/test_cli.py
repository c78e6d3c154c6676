import json

import pytest

from ising_teleport.cli import main

from conftest import fixtures_dir


def run_cli(*argv):
    return main(list(argv))


@pytest.fixture
def coupling_path():
    return str(fixtures_dir() / "coupling_example.json")


@pytest.fixture
def teleport_path():
    return str(fixtures_dir() / "teleport_default.json")


class TestEvolve:
    def test_report_and_exit_zero(self, coupling_path, tmp_path):
        out = tmp_path / "evolve.json"
        assert run_cli("evolve", "--config", coupling_path, "--t", "0.7", "--out", str(out)) == 0
        report = json.loads(out.read_text())
        assert report["within_tolerance"]
        assert report["frobenius_distance"] < 1e-10
        assert len(report["closed_form"]) == 4
        assert all(len(entry) == 2 for row in report["oracle"] for entry in row)
        assert report["manifest"]["command"] == "evolve"

    def test_time_zero_distance_zero(self, coupling_path, tmp_path):
        out = tmp_path / "evolve.json"
        assert run_cli("evolve", "--config", coupling_path, "--t", "0", "--out", str(out)) == 0
        # the oracle side goes through an eigendecomposition, so "zero"
        # means rounding noise
        assert json.loads(out.read_text())["frobenius_distance"] < 1e-14

    def test_malformed_json_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        assert run_cli("evolve", "--config", str(bad), "--t", "1") == 2
        assert "error" in capsys.readouterr().err

    def test_missing_file_exits_2(self):
        assert run_cli("evolve", "--config", "/does/not/exist.json", "--t", "1") == 2


class TestSynth:
    def test_feasible_fixture_exits_zero(self, tmp_path):
        fixture = str(fixtures_dir() / "synthesis" / "h1_a.json")
        out = tmp_path / "synth.json"
        assert run_cli("synth", "--config", fixture, "--target-h", "1", "--target-j", "1",
                       "--out", str(out)) == 0
        report = json.loads(out.read_text())
        assert report["feasible"]
        assert report["residual"] < 1e-8
        assert report["sequence"]["pulse1"]["t"] > 0

    def test_infeasible_fixture_exits_one(self, tmp_path):
        fixture = str(fixtures_dir() / "synthesis" / "infeasible_h1.json")
        out = tmp_path / "synth.json"
        assert run_cli("synth", "--config", fixture, "--target-h", "1", "--target-j", "2",
                       "--out", str(out)) == 1
        report = json.loads(out.read_text())
        assert not report["feasible"]
        assert sum(report["rejections"].values()) > 0

    def test_invalid_problem_exits_two(self, tmp_path):
        bad = tmp_path / "problem.json"
        bad.write_text(json.dumps({"h": 1, "J": [1, 2, 2], "Jp": [1, 2, 3]}))
        assert run_cli("synth", "--config", str(bad), "--target-h", "1", "--target-j", "1") == 2

    def test_bounds_override(self, tmp_path):
        fixture = str(fixtures_dir() / "synthesis" / "h1_a.json")
        out = tmp_path / "synth.json"
        code = run_cli("synth", "--config", fixture, "--target-h", "1", "--target-j", "1",
                       "--bounds", "n_max=2,np_max=2,s=none", "--out", str(out))
        assert code == 0


class TestTeleport:
    def test_default_config_four_branches(self, teleport_path, tmp_path):
        out = tmp_path / "teleport.json"
        assert run_cli("teleport", "--config", teleport_path, "--seed", "42", "--out", str(out)) == 0
        report = json.loads(out.read_text())
        assert len(report["branches"]) == 4
        assert report["min_fidelity"] > 1 - 1e-10
        for branch in report["branches"]:
            assert branch["probability"] == pytest.approx(0.25, abs=1e-12)

    def test_seeded_runs_byte_identical(self, teleport_path, tmp_path):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        assert run_cli("teleport", "--config", teleport_path, "--seed", "42", "--out", str(out1)) == 0
        assert run_cli("teleport", "--config", teleport_path, "--seed", "42", "--out", str(out2)) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_sample_mode_deterministic(self, teleport_path, tmp_path):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        for out in (out1, out2):
            assert run_cli("teleport", "--config", teleport_path, "--seed", "7",
                           "--mode", "sample", "--out", str(out)) == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert len(json.loads(out1.read_text())["branches"]) == 1

    def test_explicit_amplitudes(self, tmp_path):
        config = tmp_path / "teleport.json"
        config.write_text(json.dumps({
            "gate": {"h": 1, "j": 2}, "ancilla": [0, 0], "basis": "bell",
            "input": {"alpha": [0.6, 0.0], "beta": [0.0, 0.8]},
        }))
        out = tmp_path / "r.json"
        assert run_cli("teleport", "--config", str(config), "--out", str(out)) == 0
        report = json.loads(out.read_text())
        assert report["manifest"]["config"]["input"]["alpha"] == [0.6, 0.0]

    def test_multiqubit_plan(self, tmp_path):
        fixture = str(fixtures_dir() / "teleport_n2.json")
        out = tmp_path / "r.json"
        assert run_cli("teleport", "--config", fixture, "--seed", "3", "--out", str(out)) == 0
        report = json.loads(out.read_text())
        assert len(report["branches"]) == 16
        assert report["min_fidelity"] > 1 - 1e-10
        assert report["layout"]["outputs"] == [3, 5]

    def test_missing_input_and_seed_exits_two(self, teleport_path):
        assert run_cli("teleport", "--config", teleport_path) == 2


class TestTable1:
    def test_csv_rows(self, tmp_path):
        out = tmp_path / "table.csv"
        assert run_cli("table1", "--out", str(out)) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "# format_version: 1"
        assert lines[1] == "basis,m1,m2,teleported_state,correction"
        assert len(lines) == 10
        corrections = [line.split(",")[-1] for line in lines[2:]]
        assert corrections == ["Z3 H3", "X3 Z3 H3", "H3", "X3 H3", "I3", "X3", "Z3 X3", "Z3"]


class TestVerify:
    @pytest.mark.parametrize("suite", ["blocks", "corrections", "table1"])
    def test_suites_pass(self, suite, tmp_path):
        out = tmp_path / "verify.json"
        assert run_cli("verify", "--suite", suite, "--out", str(out)) == 0
        report = json.loads(out.read_text())
        assert report["passed"]

    def test_synthesis_suite(self, tmp_path):
        out = tmp_path / "verify.json"
        assert run_cli("verify", "--suite", "synthesis",
                       "--fixtures", str(fixtures_dir() / "synthesis"), "--out", str(out)) == 0

    def test_unknown_suite_exits_two(self):
        assert run_cli("verify", "--suite", "nonsense") == 2
