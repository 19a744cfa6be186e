from fractions import Fraction

import pytest

from config.run_config import RunConfig
from exceptions.wse_exceptions import ValidationException
from models.protocol_data import RoundRecord
from services.simulation.protocol_simulator import ProtocolSimulator

class TestDefaults:

    def test_sample_defaults_per_command(self):
        assert RunConfig("bounds").samples == 100
        assert RunConfig("tradeoff").samples == 1000

    def test_simulation_defaults(self):
        config = RunConfig("simulate")
        assert (config.q, config.gamma, config.n, config.strategy) == (0.5, Fraction(17, 20), 20, "classical")
        assert config.test_params().gamma_fraction.denominator == 20

    def test_unknown_command(self):
        with pytest.raises(ValidationException):
            RunConfig("plot")

class TestSources:

    def test_file_then_flags(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("# sequential test\ngamma=17/20\nq=0.3\nn=12\n")
        config = RunConfig.from_sources("simulate", str(path), {"q": "0.4", "trials": None})
        assert config.gamma == Fraction(17, 20)
        assert config.q == 0.4
        assert config.n == 12

    def test_rational_gamma_tie_passes(self):
        # 5 wins out of 6 tests sits exactly on gamma = 5/6
        config = RunConfig.from_sources("simulate", None, {"gamma": "5/6", "n": "6"})
        gamma = config.test_params().gamma_fraction
        assert gamma == Fraction(5, 6)
        rounds = [RoundRecord(index=j, q=1, theta=0, x=0, t=0, y=0 if j < 5 else 1) for j in range(6)]
        transcript = ProtocolSimulator.build_transcript(rounds, gamma)
        assert (transcript.s_n, transcript.r_n) == (5, 6)
        assert transcript.passed

    def test_grids(self, tmp_path):
        path = tmp_path / "grid.conf"
        path.write_text("q_grid=0.1,0.5\ngamma_grid=3/4,0.9\n")
        config = RunConfig.from_sources("alpha-min", str(path))
        assert config.q_grid == (0.1, 0.5)
        assert config.gamma_grid == (0.75, 0.9)
        assert config.to_dict()["q_grid"] == "0.1,0.5"

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("colour=blue\n")
        with pytest.raises(ValidationException):
            RunConfig.from_sources("bounds", str(path))

    def test_unparsable_value(self):
        with pytest.raises(ValidationException):
            RunConfig.from_sources("simulate", None, {"gamma": "high"})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationException):
            RunConfig.from_sources("bounds", str(tmp_path / "absent.conf"))

class TestValidation:

    @pytest.mark.parametrize("seed", [-1, 2 ** 64])
    def test_seed_range(self, seed):
        with pytest.raises(ValidationException):
            RunConfig("bounds", seed=seed)

    def test_beta_range(self):
        with pytest.raises(ValidationException):
            RunConfig("bounds", beta_min=1.5)
        with pytest.raises(ValidationException):
            RunConfig("bounds", beta_min=2.6, beta_max=2.4)

    def test_grid_domain(self):
        with pytest.raises(ValidationException):
            RunConfig("alpha-min", gamma_grid=(0.7,))
        with pytest.raises(ValidationException):
            RunConfig("alpha-min", q_grid=())

    def test_law_needs_both_probabilities(self):
        with pytest.raises(ValidationException):
            RunConfig("simulate", strategy="law", p_live=0.9)

    def test_samples_minimum(self):
        with pytest.raises(ValidationException):
            RunConfig("tradeoff", samples=1)

    def test_verify_scale(self):
        with pytest.raises(ValidationException):
            RunConfig("verify", verify_scale="huge")

class TestStrategyArguments:

    def test_curve_with_and_without_t(self):
        assert RunConfig("simulate", strategy="curve", t=0.3).strategy_kwargs() == {"t": 0.3}
        assert RunConfig("simulate", strategy="curve").strategy_kwargs() == {"q": 0.5, "gamma": 0.85}

    def test_law(self):
        config = RunConfig("simulate", strategy="law", p_live=0.9, p_test=0.8)
        assert config.strategy_kwargs() == {"p_live_correct": 0.9, "p_test_win": 0.8}

    def test_echo_skips_unset_values(self):
        echo = RunConfig("simulate").to_dict()
        assert echo["command"] == "simulate" and echo["gamma"] == "17/20"
        assert "t" not in echo and "p_live" not in echo
