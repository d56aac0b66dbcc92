"""CLI behaviour: golden outputs, exit codes, reproducibility, figures."""
from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

GOLDEN = Path(__file__).parent / "golden"


def run_cli(*args, **kwargs):
    return subprocess.run(
        [sys.executable, "-m", "revineq.cli", *args],
        capture_output=True,
        text=True,
        **kwargs,
    )


class TestGoldenOutputs:
    def test_classify_power_weight(self):
        cp = run_cli("classify", "--sequence", "power:1:32", "--numax", "4")
        assert cp.returncode == 0
        assert cp.stdout == (GOLDEN / "classify_power.json").read_text()
        payload = json.loads(cp.stdout)
        assert payload["K1"] == "2" and payload["K2"] == "2"
        assert payload["direction"] == "increasing"

    def test_eval_unit_instance(self):
        cp = run_cli(
            "eval", "--form", "T2_2", "--n", "1", "--m", "16", "--p", "1",
            "--weights", "unit", "--a", "ones",
        )
        assert cp.returncode == 0
        assert cp.stdout == (GOLDEN / "eval_t2_2_unit.json").read_text()
        payload = json.loads(cp.stdout)
        assert payload == {"lhs": "136", "rhs0": "108", "ratio": "34/27", "exact": True}

    def test_sweep_csv(self):
        cp = run_cli(
            "sweep", "--family", "T2_2", "--n-values", "1,2,4",
            "--m-multiplier", "16", "--p", "1",
        )
        assert cp.returncode == 0
        assert cp.stdout == (GOLDEN / "sweep_t2_2.csv").read_text()

    def test_byte_identical_across_runs(self):
        argsets = [
            ("classify", "--sequence", "power:1:32", "--numax", "4"),
            ("eval", "--form", "T2_2", "--n", "1", "--m", "16", "--p", "1",
             "--weights", "unit", "--a", "ones"),
            ("sweep", "--family", "T2_2", "--n-values", "1,2,4",
             "--m-multiplier", "16", "--p", "1"),
            ("search", "--form", "T2_2", "--n", "1", "--m", "16", "--p", "2",
             "--weights", "unit", "--method", "descent", "--budget", "8",
             "--restarts", "2", "--seed", "11"),
            ("derive", "--form", "T2_4", "--n", "1", "--m", "8", "--p", "1/2",
             "--weights", "unit", "--validate", "50", "--seed", "3"),
        ]
        for args in argsets:
            first = run_cli(*args)
            second = run_cli(*args)
            assert first.returncode == second.returncode == 0, first.stderr
            assert first.stdout == second.stdout


class TestExitCodes:
    def test_precondition_violation_names_the_multiple(self):
        cp = run_cli("derive", "--form", "T2_2", "--n", "1", "--m", "15", "--p", "1",
                     "--weights", "unit")
        assert cp.returncode == 2
        assert "16n" in cp.stderr
        assert cp.stdout == ""

    def test_malformed_subcommand(self):
        cp = run_cli("frobnicate")
        assert cp.returncode == 1

    def test_malformed_sequence_spec(self):
        cp = run_cli("classify", "--sequence", "nonsense:spec", "--numax", "2")
        assert cp.returncode == 1
        assert "error:" in cp.stderr

    def test_arithmetic_error_exit(self):
        # step:1 has a zero entry inside the geometric window: no finite constant.
        cp = run_cli("classify", "--sequence", "step:1:8", "--numax", "1",
                     "--geo-mmax", "4")
        assert cp.returncode == 3

    def test_bad_precision_rejected(self):
        cp = run_cli("--precision", "10", "classify", "--sequence", "ones:8", "--numax", "1")
        assert cp.returncode == 1

    def test_precision_env_var(self):
        import os

        env = dict(os.environ, REVINEQ_PRECISION="80")
        cp = run_cli("jensen", "--sequence", "ones:4", "--alpha", "1/2", "--beta", "3/2", env=env)
        assert cp.returncode == 0
        env_bad = dict(os.environ, REVINEQ_PRECISION="20")
        cp2 = run_cli("jensen", "--sequence", "ones:4", "--alpha", "1/2", "--beta", "3/2", env=env_bad)
        assert cp2.returncode == 1

    def test_eval_p_range_violation(self):
        cp = run_cli("eval", "--form", "T2_3", "--n", "1", "--m", "4", "--p", "2",
                     "--weights", "unit", "--a", "ones")
        assert cp.returncode == 2


class TestCommands:
    def test_jensen(self):
        cp = run_cli("jensen", "--sequence", "random:3:uniform:20", "--alpha", "1", "--beta", "2")
        assert cp.returncode == 0
        payload = json.loads(cp.stdout)
        assert payload["holds"] is True

    def test_check_with_constant(self):
        cp = run_cli("check", "--form", "T2_2", "--n", "1", "--m", "16", "--p", "1",
                     "--weights", "unit", "--a", "ones", "--constant", "1")
        assert cp.returncode == 0
        assert json.loads(cp.stdout)["holds"] is True
        cp2 = run_cli("check", "--form", "T2_2", "--n", "1", "--m", "16", "--p", "1",
                      "--weights", "unit", "--a", "ones", "--constant", "2")
        assert json.loads(cp2.stdout)["holds"] is False

    def test_check_equiv_needs_two_bounds(self):
        cp = run_cli("check", "--form", "C5_2a", "--n", "1", "--m", "8", "--p", "1",
                     "--alpha", "1", "--a", "harmonic")
        assert cp.returncode == 1
        cp2 = run_cli("check", "--form", "C5_2a", "--n", "1", "--m", "8", "--p", "1",
                      "--alpha", "1", "--a", "harmonic",
                      "--c-lower", "1/2", "--c-upper", "2")
        assert cp2.returncode == 0
        assert json.loads(cp2.stdout)["holds"] is True

    def test_search_exact(self):
        cp = run_cli("search", "--form", "T2_2", "--n", "1", "--m", "16", "--p", "1",
                     "--weights", "unit", "--method", "exact")
        assert cp.returncode == 0
        payload = json.loads(cp.stdout)
        assert payload["best_ratio"] == "34/27"
        assert payload["kstar"] == 16

    def test_derive_certificate_payload(self):
        cp = run_cli("derive", "--form", "T2_2", "--n", "1", "--m", "16", "--p", "1",
                     "--weights", "unit", "--validate", "100")
        assert cp.returncode == 0
        payload = json.loads(cp.stdout)
        assert payload["C"] == "1/16"
        assert payload["validation"]["fail_count"] == 0
        labels = [s["label"] for s in payload["steps"]]
        assert "block_reconstitution" in labels

    def test_output_file_and_plot(self, tmp_path):
        csv_path = tmp_path / "sweep.csv"
        json_path = tmp_path / "sweep.json"
        plot_path = tmp_path / "sweep.png"
        cp = run_cli(
            "--output", str(csv_path),
            "sweep", "--family", "C5_2a", "--n-values", "4,8,16",
            "--m-multiplier", "1", "--p", "1", "--alpha", "1",
            "--lambda-exp", "0", "--a", "harmonic",
            "--json-out", str(json_path), "--plot", str(plot_path),
        )
        assert cp.returncode == 0, cp.stderr
        assert csv_path.read_text().startswith("n,m,p,alpha,lambda_exp,empirical_C,method,exact")
        payload = json.loads(json_path.read_text())
        assert [row["empirical_C"] for row in payload["rows"]] == ["1", "1", "1"]
        data = plot_path.read_bytes()
        assert data[:8] == b"\x89PNG\r\n\x1a\n"

    def test_sequence_file_input(self, tmp_path):
        seq_path = tmp_path / "seq.json"
        seq_path.write_text('{"mode": "exact", "values": ["1", "1", "1", "1"]}')
        cp = run_cli("classify", "--sequence", f"file:{seq_path}", "--numax", "1")
        assert cp.returncode == 0
        assert json.loads(cp.stdout)["K1"] == "1"
