import io
import json

import numpy as np
import pandas as pd
import pytest

import main
from constants.Constants import EXIT_OK, EXIT_VALIDATION_ERROR, EXIT_VERIFICATION_FAILURE
from models.protocol_data import CheckResult
from services.analysis.bounds_analyzer import BoundsAnalyzer
from services.verification_service import VerificationService
from utils.file_utils import FileUtils

def read_csv(text: str) -> pd.DataFrame:
    return pd.read_csv(io.StringIO(text), comment="#")

class TestCurves:

    def test_bounds_curve(self, capsys):
        assert main.main(["bounds", "--samples", "5"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("# beta_max=")
        frame = read_csv(out)
        assert list(frame.columns) == ["beta", "f_beta"]
        assert len(frame) == 5
        assert frame["f_beta"].iloc[0] == 0.0
        np.testing.assert_allclose(frame["f_beta"].iloc[-1], BoundsAnalyzer.h(0.0), rtol=1e-5)

    def test_tradeoff_from_config_file(self, tmp_path, capsys):
        config = tmp_path / "tradeoff.conf"
        config.write_text("samples=3\n")
        assert main.main(["tradeoff", "--config", str(config)]) == EXIT_OK
        frame = read_csv(capsys.readouterr().out)
        np.testing.assert_allclose(frame["t"], [0.0, 0.5, 1.0])
        np.testing.assert_allclose(frame["p_L"].iloc[-1], 1.0)

    def test_alpha_min_json(self, capsys):
        assert main.main(["alpha-min", "--q-grid", "0,0.5", "--gamma-grid", "0.75,0.85", "--format", "json"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["config"]["q_grid"] == "0.0,0.5"
        assert len(document["rows"]) == 4
        assert document["rows"][0]["alpha_min"] == 1.0
        assert all("converged" in row for row in document["rows"])
        assert document["rows"][3]["alpha_min"] < 1.0

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "f.csv"
        assert main.main(["bounds", "--samples", "3", "--out", str(target)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert len(read_csv(target.read_text())) == 3

class TestSimulate:

    ARGS = ["simulate", "--q", "0.5", "--gamma", "17/20", "--n", "10", "--trials", "60", "--seed", "11"]

    def test_replay_is_byte_identical(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main.main(self.ARGS + ["--out", str(first)]) == EXIT_OK
        assert main.main(self.ARGS + ["--out", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()
        assert "# seed=11" in first.read_text()

    def test_transcript(self, tmp_path, capsys):
        transcript = tmp_path / "run.jsonl"
        assert main.main(self.ARGS + ["--transcript", str(transcript)]) == EXIT_OK
        loaded = FileUtils.load_transcript(str(transcript))
        assert len(loaded.rounds) == 10
        assert loaded.counters_consistent()

    def test_json_report(self, capsys):
        assert main.main(self.ARGS + ["--strategy", "curve", "--format", "json"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["strategy"]["name"] == "curve"
        assert document["report"]["trials"] == 60
        assert document["config"]["gamma"] == "17/20"

    def test_bound_violation_exit_code(self, capsys):
        args = ["simulate", "--strategy", "perfect", "--gamma", "1", "--n", "20", "--trials", "200"]
        assert main.main(args) == EXIT_VERIFICATION_FAILURE
        frame = read_csv(capsys.readouterr().out)
        assert bool(frame["bound_violated"].iloc[0])

    def test_law_needs_probabilities(self, capsys):
        assert main.main(["simulate", "--strategy", "law", "--p-live", "0.9"]) == EXIT_VALIDATION_ERROR
        assert capsys.readouterr().out == ""

class TestValidationErrors:

    def test_beta_outside_range(self):
        assert main.main(["bounds", "--beta-min", "1.5"]) == EXIT_VALIDATION_ERROR

    def test_negative_seed(self):
        assert main.main(["tradeoff", "--seed", "-3"]) == EXIT_VALIDATION_ERROR

    def test_unknown_strategy_is_a_usage_error(self):
        with pytest.raises(SystemExit) as error:
            main.main(["simulate", "--strategy", "oracle"])
        assert error.value.code == 2

class TestVerify:

    def test_passing_checks(self, monkeypatch, capsys):
        monkeypatch.setattr(VerificationService, "checks",
                            lambda self: [self._check_side_information, self._check_sequential_gap])
        assert main.main(["verify"]) == EXIT_OK
        frame = read_csv(capsys.readouterr().out)
        assert list(frame.columns) == ["name", "passed", "detail"]
        assert frame["passed"].all()
        assert "appendixC.sequential=3/8" in set(frame["name"])

    def test_failing_check_exit_code(self, monkeypatch, capsys):
        failing = lambda self: [lambda: [CheckResult(name="protocol.threshold_tie", passed=False)]]
        monkeypatch.setattr(VerificationService, "checks", failing)
        assert main.main(["verify", "--format", "json"]) == EXIT_VERIFICATION_FAILURE
        document = json.loads(capsys.readouterr().out)
        assert document["report"]["passed"] is False
