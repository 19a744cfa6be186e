import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from constants.Constants import SIGMA_X, SIGMA_Z, PHI_PLUS, PROTOCOL_PHASES
from exceptions.wse_exceptions import ValidationException, StrategyContractException
from models.operators import DensityMatrix
from models.protocol_data import RoundRecord, Transcript, HonestRun
from models.security_data import TestParams, exact_gamma
from services.analysis.base_analyzer import BaseAnalyzer
from utils.debug_utils import DebugUtils
from .attack_strategy import AttackStrategy, RoundLaw, QuantumRoundModel
from .rng import DeterministicRNG

GammaLike = Union[float, str, Fraction]

# uniform columns drawn per round: test coin, basis, test input, bit, outcome
DRAWS_PER_ROUND = 5

class ProtocolSimulator:
    """Round-level execution of honest runs and sequential attacks."""

    @staticmethod
    def gamma_fraction(gamma: GammaLike) -> Fraction:
        """Threshold as an exact rational; floats are read as the decimal they print as."""
        return exact_gamma(gamma)

    @staticmethod
    def passes_threshold(s_n: int, r_n: int, gamma: Fraction) -> bool:
        """S_n >= gamma·R_n by integer cross-multiplication; R_n = 0 passes."""
        return s_n * gamma.denominator >= gamma.numerator * r_n

    @staticmethod
    def build_transcript(rounds: Sequence[RoundRecord], gamma: GammaLike) -> Transcript:
        """Derive the counters and events of a finished run."""
        gamma = ProtocolSimulator.gamma_fraction(gamma)
        r_n = sum(r.q for r in rounds)
        s_n = sum(1 for r in rounds if r.is_test and r.win)
        h_n = all(r.correct for r in rounds if not r.is_test)
        passed = ProtocolSimulator.passes_threshold(s_n, r_n, gamma)
        return Transcript(
            rounds=tuple(rounds),
            gamma=gamma,
            r_n=r_n,
            s_n=s_n,
            passed=passed,
            h_n=h_n,
            failed=passed and h_n,
            vacuous_pass=r_n == 0
        )

    @staticmethod
    def _sample(probabilities: np.ndarray, u: float) -> int:
        weights = np.asarray(probabilities, dtype=float).ravel()
        cumulative = np.cumsum(weights) / weights.sum()
        return min(int(np.searchsorted(cumulative, u, side="right")), weights.size - 1)

    @staticmethod
    def _play_round(j: int, q: float, model, u: np.ndarray) -> RoundRecord:
        is_test = int(u[0] < q)
        theta = int(u[1] < 0.5)
        if isinstance(model, RoundLaw):
            x = int(u[3] < 0.5)
            if is_test:
                t = int(u[2] < 0.5)
                win = u[4] < model.p_test_win
                y = x ^ (theta & t) ^ (0 if win else 1)
                return RoundRecord(index=j, q=1, theta=theta, x=x, t=t, y=y)
            guess = x if u[4] < model.p_live_correct else 1 - x
            return RoundRecord(index=j, q=0, theta=theta, x=x, k=guess, guess=guess)
        if isinstance(model, QuantumRoundModel):
            if is_test:
                t = int(u[2] < 0.5)
                outcome = ProtocolSimulator._sample(model.test_table[theta, t], u[4])
                return RoundRecord(index=j, q=1, theta=theta, x=outcome // 2, t=t, y=outcome % 2)
            outcome = ProtocolSimulator._sample(model.live_table[theta], u[4])
            k = outcome % 2
            return RoundRecord(index=j, q=0, theta=theta, x=outcome // 2, k=k, guess=model.guess_table[(k, theta)])
        raise StrategyContractException(f"Strategy returned an unsupported round model: {type(model).__name__}")

    @staticmethod
    def run_sequential_attack(params: TestParams, strategy: AttackStrategy, seed: int,
                              trial_index: int = 0) -> Transcript:
        """
        Execute n rounds of the sequential test against an attack strategy.

        Each round Alice flips a q-biased coin for a test round and picks a
        uniform basis. Test rounds draw a uniform input t for Bob's device and
        score the CHSH condition x ⊕ y = theta·t; live rounds score Bob's guess.

        Args:
            params: Test probability, threshold and round count
            strategy: Attack strategy supplying the round models
            seed: Master seed
            trial_index: Stream index; (seed, trial_index) fixes the run

        Returns:
            Transcript with counters and events
        """
        rng = DeterministicRNG.for_trial(seed, trial_index)
        draws = rng.block(params.n, DRAWS_PER_ROUND)
        memory = strategy.initial_memory()
        rounds: List[RoundRecord] = []
        for j in range(params.n):
            model, memory = strategy.round_model(j, memory)
            rounds.append(ProtocolSimulator._play_round(j, params.q, model, draws[j]))
        return ProtocolSimulator.build_transcript(rounds, params.gamma_fraction)

    @staticmethod
    def _honest_table() -> np.ndarray:
        """Born probabilities [theta, theta_prime, x, x_bob] for ideal devices measuring BB84 bases."""
        rho = DensityMatrix.from_vector(PHI_PLUS).entries
        identity = np.eye(2)
        bases = [SIGMA_Z, SIGMA_X]
        table = np.zeros((2, 2, 2, 2))
        for theta, theta_prime, x, x_bob in itertools.product((0, 1), repeat=4):
            alice = (identity + (-1) ** x * bases[theta]) / 2
            bob = (identity + (-1) ** x_bob * bases[theta_prime]) / 2
            table[theta, theta_prime, x, x_bob] = np.real(np.trace(np.kron(alice, bob) @ rho))
        return np.clip(table, 0.0, None)

    @staticmethod
    def run_honest(n: int, seed: int, theta: Optional[Sequence[int]] = None,
                   theta_prime: Optional[Sequence[int]] = None, trial_index: int = 0) -> HonestRun:
        """
        Honest execution with ideal devices.

        Alice and Bob each pick uniform bases (unless forced), measure their
        halves of |Φ₊⟩, wait, Alice announces her bases and Bob keeps the
        rounds where the bases agree.
        """
        n = BaseAnalyzer._validate_positive_int("n", n)
        for name, forced in (("theta", theta), ("theta_prime", theta_prime)):
            if forced is not None and (len(forced) != n or any(b not in (0, 1) for b in forced)):
                raise ValidationException(f"{name} must be a bit string of length {n}")
        rng = DeterministicRNG.for_trial(seed, trial_index)
        draws = rng.block(n, 3)
        table = ProtocolSimulator._honest_table()
        phases = [PROTOCOL_PHASES[0]]

        alice_bases = [int(theta[j]) if theta is not None else int(draws[j, 0] < 0.5) for j in range(n)]
        bob_bases = [int(theta_prime[j]) if theta_prime is not None else int(draws[j, 1] < 0.5) for j in range(n)]
        x, bob_bits = [], []
        for j in range(n):
            outcome = ProtocolSimulator._sample(table[alice_bases[j], bob_bases[j]], draws[j, 2])
            x.append(outcome // 2)
            bob_bits.append(outcome % 2)
        phases.append(PROTOCOL_PHASES[1])
        # storage bound applies here; no timing is simulated
        phases.append(PROTOCOL_PHASES[2])
        phases.append(PROTOCOL_PHASES[3])
        index_set = tuple(j for j in range(n) if alice_bases[j] == bob_bases[j])
        phases.append(PROTOCOL_PHASES[4])
        return HonestRun(
            x=tuple(x),
            theta=tuple(alice_bases),
            theta_prime=tuple(bob_bases),
            bob_bits=tuple(bob_bits),
            index_set=index_set,
            phases=tuple(phases)
        )

    @staticmethod
    def index_set_distribution(theta: Sequence[int]) -> Dict[Tuple[int, ...], Fraction]:
        """Exact distribution of the index set for fixed Alice bases and uniform Bob bases."""
        n = len(theta)
        weight = Fraction(1, 2 ** n)
        distribution: Dict[Tuple[int, ...], Fraction] = {}
        for theta_prime in itertools.product((0, 1), repeat=n):
            index_set = tuple(j for j in range(n) if theta[j] == theta_prime[j])
            distribution[index_set] = distribution.get(index_set, Fraction(0)) + weight
        return distribution

    @staticmethod
    def honest_bob_uniformity(n: int) -> Dict[Tuple[int, ...], Fraction]:
        """
        Exact index-set distribution averaged over all of Alice's basis strings.

        Raises:
            ValidationException: If n is outside 1..4
        """
        n = BaseAnalyzer._validate_positive_int("n", n)
        if n > 4:
            raise ValidationException(f"Exact enumeration is limited to n <= 4, got {n}")
        total: Dict[Tuple[int, ...], Fraction] = {}
        weight = Fraction(1, 2 ** n)
        for theta in itertools.product((0, 1), repeat=n):
            for index_set, p in ProtocolSimulator.index_set_distribution(theta).items():
                total[index_set] = total.get(index_set, Fraction(0)) + weight * p
        DebugUtils.debug(f"Index-set distribution for n={n}: {len(total)} subsets")
        return total
