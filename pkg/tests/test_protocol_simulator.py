import math
from fractions import Fraction
from typing import Any, Tuple

import pytest

from constants.Constants import PROTOCOL_PHASES, QUANTUM_WIN_PROBABILITY
from exceptions.wse_exceptions import StrategyContractException, ValidationException
from models.protocol_data import RoundRecord, Transcript
from models.security_data import TestParams
from services.simulation.attack_strategy import (
    AttackStrategy, ClassicalStrategy, PerfectStrategy, QuantumBisectorStrategy, RoundLaw
)
from services.simulation.protocol_simulator import ProtocolSimulator
from utils.file_utils import FileUtils

SEED = 20160125

class BrokenStrategy(AttackStrategy):

    @property
    def name(self) -> str:
        return "broken"

    def round_model(self, round_index: int, memory: Any) -> Tuple[Any, Any]:
        return "not a round model", memory

class TestThreshold:

    def test_exact_tie_passes(self):
        gamma = Fraction(17, 20)
        assert ProtocolSimulator.passes_threshold(17, 20, gamma)
        assert not ProtocolSimulator.passes_threshold(16, 20, gamma)

    def test_no_test_rounds_is_a_vacuous_pass(self):
        transcript = ProtocolSimulator.build_transcript([], Fraction(17, 20))
        assert transcript.passed and transcript.vacuous_pass and transcript.r_n == 0

    def test_gamma_read_as_written(self):
        assert ProtocolSimulator.gamma_fraction(0.85) == Fraction(17, 20)
        assert ProtocolSimulator.gamma_fraction("17/20") == Fraction(17, 20)
        assert TestParams(0.5, 0.85).gamma_fraction == Fraction(17, 20)
        assert TestParams(0.5, Fraction(5, 6)).gamma_fraction == Fraction(5, 6)
        assert TestParams(0.5, "5/6").gamma == pytest.approx(5 / 6)
        with pytest.raises(ValidationException):
            ProtocolSimulator.gamma_fraction("high")

    def test_counters_from_rounds(self):
        rounds = [
            RoundRecord(index=0, q=1, theta=1, x=0, t=1, y=1),
            RoundRecord(index=1, q=1, theta=1, x=0, t=1, y=0),
            RoundRecord(index=2, q=0, theta=0, x=1, k=1, guess=1),
        ]
        transcript = ProtocolSimulator.build_transcript(rounds, "1/2")
        assert (transcript.r_n, transcript.s_n) == (2, 1)
        assert transcript.passed and transcript.h_n and transcript.failed
        assert transcript.counters_consistent()

    def test_round_record_fields_checked(self):
        with pytest.raises(ValidationException):
            RoundRecord(index=0, q=1, theta=0, x=0, k=0, guess=0)
        with pytest.raises(ValidationException):
            RoundRecord(index=0, q=0, theta=2, x=0, k=0, guess=0)

class TestSequentialAttack:

    def test_replay_is_identical(self):
        params = TestParams(0.5, 0.85, 30)
        first = ProtocolSimulator.run_sequential_attack(params, ClassicalStrategy(), SEED, 7)
        second = ProtocolSimulator.run_sequential_attack(params, ClassicalStrategy(), SEED, 7)
        assert first.to_jsonl() == second.to_jsonl()

    def test_no_test_rounds(self):
        transcript = ProtocolSimulator.run_sequential_attack(TestParams(0.0, 0.9, 15), ClassicalStrategy(), SEED)
        assert transcript.r_n == 0 and transcript.vacuous_pass
        assert transcript.failed

    def test_only_test_rounds(self):
        transcript = ProtocolSimulator.run_sequential_attack(TestParams(1.0, 0.75, 10), ClassicalStrategy(), SEED)
        assert transcript.r_n == 10 and transcript.h_n
        assert transcript.counters_consistent()

    def test_perfect_devices_always_fail_the_protocol(self):
        for trial in range(20):
            transcript = ProtocolSimulator.run_sequential_attack(
                TestParams(0.5, 1.0, 12), PerfectStrategy(), SEED, trial
            )
            assert transcript.failed

    def test_unsupported_round_model(self):
        with pytest.raises(StrategyContractException):
            ProtocolSimulator.run_sequential_attack(TestParams(0.5, 0.85, 3), BrokenStrategy(), SEED)

    def test_round_law_must_hold_probabilities(self):
        with pytest.raises(StrategyContractException):
            RoundLaw(1.5, 0.5)

    def test_transcript_file(self, tmp_path):
        transcript = ProtocolSimulator.run_sequential_attack(TestParams(0.5, 0.85, 12), ClassicalStrategy(), SEED)
        path = tmp_path / "transcript.jsonl"
        FileUtils.save_transcript(transcript, str(path))
        loaded = FileUtils.load_transcript(str(path))
        assert loaded == transcript
        assert loaded.counters_consistent()

    def test_missing_footer(self):
        with pytest.raises(ValidationException):
            Transcript.from_jsonl('{"index": 0}\n')

class TestQuantumBisector:

    def test_born_rule_probabilities(self):
        model = QuantumBisectorStrategy().model
        assert model.test_win_probability() == pytest.approx(QUANTUM_WIN_PROBABILITY, abs=1e-12)
        assert model.live_correct_probability() == pytest.approx(QUANTUM_WIN_PROBABILITY, abs=1e-12)

    def test_describe(self):
        description = QuantumBisectorStrategy(math.pi / 3).describe()
        assert description["name"] == "quantum-bisector"
        assert description["admissible"] is True
        assert description["p_live_correct"] == pytest.approx(0.5 + 0.5 * math.cos(math.pi / 6))

class TestHonestRun:

    def test_agreement_on_index_set(self):
        for trial in range(50):
            run = ProtocolSimulator.run_honest(8, SEED, trial_index=trial)
            assert run.agreement_on_index_set()
            assert run.index_set == tuple(j for j in range(8) if run.theta[j] == run.theta_prime[j])
            assert run.phases == tuple(PROTOCOL_PHASES)

    def test_forced_bases(self):
        run = ProtocolSimulator.run_honest(4, SEED, theta=[0, 1, 0, 1], theta_prime=[0, 1, 1, 0])
        assert run.index_set == (0, 1)
        assert run.x_index == run.bob_index

    def test_forced_bases_length_checked(self):
        with pytest.raises(ValidationException):
            ProtocolSimulator.run_honest(3, SEED, theta=[0, 1])

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_index_set_is_uniform(self, n):
        distribution = ProtocolSimulator.honest_bob_uniformity(n)
        assert len(distribution) == 2 ** n
        assert set(distribution.values()) == {Fraction(1, 2 ** n)}

    def test_uniformity_limited_to_small_n(self):
        with pytest.raises(ValidationException):
            ProtocolSimulator.honest_bob_uniformity(5)
