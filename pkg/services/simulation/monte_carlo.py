import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple, TypeVar

import numpy as np
from scipy.stats import norm

from config.settings import Settings
from models.protocol_data import MonteCarloReport, AuditRow, RecursionAuditReport
from models.security_data import TestParams
from services.analysis.alpha_analyzer import AlphaAnalyzer
from services.analysis.base_analyzer import BaseAnalyzer
from utils.debug_utils import DebugUtils
from .attack_strategy import AttackStrategy
from .protocol_simulator import ProtocolSimulator

T = TypeVar("T")

@dataclass
class _FailureCounts:
    trials: int = 0
    failures: int = 0
    passes: int = 0
    passes_with_all_guesses: int = 0
    vacuous_passes: int = 0
    inconsistent: int = 0
    live_rounds: int = 0
    live_correct: int = 0
    test_rounds: int = 0
    test_wins: int = 0

    def merge(self, other: "_FailureCounts") -> "_FailureCounts":
        for name in self.__dataclass_fields__:
            setattr(self, name, getattr(self, name) + getattr(other, name))
        return self

class MonteCarloSimulator:
    """Seeded Monte-Carlo estimates of the failure probability under sequential attacks."""

    @staticmethod
    def wilson_interval(successes: int, trials: int,
                        confidence: float = Settings.CONFIDENCE_LEVEL) -> Tuple[float, float]:
        """Wilson score interval for a binomial proportion."""
        if trials <= 0:
            return 0.0, 1.0
        z = float(norm.ppf(1.0 - (1.0 - confidence) / 2.0))
        p_hat = successes / trials
        denominator = 1.0 + z ** 2 / trials
        center = (p_hat + z ** 2 / (2 * trials)) / denominator
        half_width = z * math.sqrt(p_hat * (1 - p_hat) / trials + z ** 2 / (4 * trials ** 2)) / denominator
        return max(0.0, center - half_width), min(1.0, center + half_width)

    @staticmethod
    def _chunks(trials: int, workers: int) -> List[range]:
        size = max(1, math.ceil(trials / max(1, workers)))
        return [range(start, min(start + size, trials)) for start in range(0, trials, size)]

    @staticmethod
    def _map_chunks(work: Callable[[range], T], trials: int, workers: int) -> List[T]:
        """Run work over contiguous trial ranges; results come back in trial order."""
        chunks = MonteCarloSimulator._chunks(trials, workers)
        if workers <= 1 or len(chunks) <= 1:
            return [work(chunk) for chunk in chunks]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(work, chunks))

    @staticmethod
    def _count_failures(params: TestParams, strategy: AttackStrategy, seed: int, trial_range: range) -> _FailureCounts:
        counts = _FailureCounts()
        for trial in trial_range:
            transcript = ProtocolSimulator.run_sequential_attack(params, strategy, seed, trial)
            counts.trials += 1
            counts.failures += transcript.failed
            counts.passes += transcript.passed
            counts.passes_with_all_guesses += transcript.passed and transcript.h_n
            counts.vacuous_passes += transcript.vacuous_pass
            counts.inconsistent += not transcript.counters_consistent()
            for record in transcript.rounds:
                if record.is_test:
                    counts.test_rounds += 1
                    counts.test_wins += record.win
                else:
                    counts.live_rounds += 1
                    counts.live_correct += record.correct
        return counts

    @staticmethod
    def monte_carlo_failure(params: TestParams, strategy: AttackStrategy, trials: int, seed: int,
                            workers: Optional[int] = None) -> MonteCarloReport:
        """
        Estimate Pr[F] over independent seeded trials and compare it with [alpha_min]^n.

        Args:
            params: Test parameters
            strategy: Attack strategy
            trials: Number of independent runs (>= 1)
            seed: Master seed; trial i uses stream (seed, i)
            workers: Thread count; defaults to Settings.worker_count()

        Returns:
            MonteCarloReport with the point estimate, score interval and bound
        """
        trials = BaseAnalyzer._validate_positive_int("trials", trials)
        workers = workers or Settings.worker_count()
        DebugUtils.info(f"Monte-Carlo: {trials} trials of {strategy.name}, params={params.to_dict()}, seed={seed}")

        counts = _FailureCounts()
        work = lambda chunk: MonteCarloSimulator._count_failures(params, strategy, seed, chunk)
        for partial in MonteCarloSimulator._map_chunks(work, trials, workers):
            counts.merge(partial)
        if counts.inconsistent:
            DebugUtils.error(f"{counts.inconsistent} transcripts had inconsistent counters")

        bound = AlphaAnalyzer.failure_bound(params)
        p_hat = counts.failures / trials
        ci_low, ci_high = MonteCarloSimulator.wilson_interval(counts.failures, trials)
        factorization_exact = counts.failures == counts.passes_with_all_guesses and counts.inconsistent == 0
        if counts.passes > 0:
            conditional_rate = counts.passes_with_all_guesses / counts.passes
            factorization_exact = factorization_exact and Fraction(counts.failures, trials) == (
                Fraction(counts.passes, trials) * Fraction(counts.passes_with_all_guesses, counts.passes)
            )
        else:
            conditional_rate = None
            factorization_exact = factorization_exact and counts.failures == 0
        if counts.vacuous_passes:
            DebugUtils.warning(f"{counts.vacuous_passes} trials passed without any test round")
        bound_violated = ci_low > bound + Settings.BOUND_SLACK_TOLERANCE
        if bound_violated:
            DebugUtils.error(f"Failure estimate {p_hat:.6g} (99% CI low {ci_low:.6g}) exceeds bound {bound:.6g}")

        return MonteCarloReport(
            params=params.to_dict(),
            strategy=strategy.name,
            admissible=strategy.admissible,
            trials=trials,
            seed=seed,
            failures=counts.failures,
            passes=counts.passes,
            passes_with_all_guesses=counts.passes_with_all_guesses,
            vacuous_passes=counts.vacuous_passes,
            p_hat=p_hat,
            ci_low=ci_low,
            ci_high=ci_high,
            confidence=Settings.CONFIDENCE_LEVEL,
            bound=bound,
            p_pass_hat=counts.passes / trials,
            conditional_rate=conditional_rate,
            factorization_exact=factorization_exact,
            bound_violated=bound_violated,
            live_rounds=counts.live_rounds,
            live_correct=counts.live_correct,
            test_rounds=counts.test_rounds,
            test_wins=counts.test_wins
        )

    @staticmethod
    def _round_outcomes(params: TestParams, strategy: AttackStrategy, seed: int,
                        trial_range: range) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-trial, per-round arrays: test flag, test win, live guess correct."""
        tests = np.zeros((len(trial_range), params.n), dtype=np.int8)
        wins = np.zeros_like(tests)
        correct = np.zeros_like(tests)
        for row, trial in enumerate(trial_range):
            transcript = ProtocolSimulator.run_sequential_attack(params, strategy, seed, trial)
            for record in transcript.rounds:
                if record.is_test:
                    tests[row, record.index] = 1
                    wins[row, record.index] = record.win
                else:
                    correct[row, record.index] = record.correct
        return tests, wins, correct

    @staticmethod
    def recursion_audit(params: TestParams, strategy: AttackStrategy, trials: int, seed: int,
                        x_points: int = 9, workers: Optional[int] = None) -> RecursionAuditReport:
        """
        Audit the one-round transition of F(l, x) = Pr[X_l >= x ∧ H_l] with X_l = S_l - gamma·R_l.

        Round l+1 either is live and guessed correctly (X unchanged), a won test
        (X grows by 1 - gamma) or a lost test (X drops by gamma), so
        F(l+1, x) is predicted from F(l, ·) and the three branch frequencies.
        The tail bound alpha(k*)^l e^{-k* x} is checked at the optimal k*.
        X_l is kept exact as the integer (S_l - gamma·R_l)·den, gamma = num/den.
        """
        trials = BaseAnalyzer._validate_positive_int("trials", trials)
        BaseAnalyzer._validate_positive_int("n", params.n)
        workers = workers or Settings.worker_count()
        gamma = params.gamma_fraction
        num, den = gamma.numerator, gamma.denominator
        n, q = params.n, params.q

        work = lambda chunk: MonteCarloSimulator._round_outcomes(params, strategy, seed, chunk)
        parts = MonteCarloSimulator._map_chunks(work, trials, workers)
        tests = np.concatenate([p[0] for p in parts])
        wins = np.concatenate([p[1] for p in parts])
        correct = np.concatenate([p[2] for p in parts])

        # prefix counters, column l = after l rounds
        zeros = np.zeros((trials, 1), dtype=np.int64)
        r = np.hstack([zeros, np.cumsum(tests, axis=1, dtype=np.int64)])
        s = np.hstack([zeros, np.cumsum(wins, axis=1, dtype=np.int64)])
        live_wrong = (1 - tests) * (1 - correct)
        h = np.hstack([np.ones((trials, 1), dtype=bool), np.cumsum(live_wrong, axis=1, dtype=np.int64) == 0])
        z = s * den - num * r

        def tail(l: int, m: int) -> float:
            return float(np.mean((z[:, l] >= m) & h[:, l]))

        def sigma(p: float) -> float:
            return math.sqrt(max(p * (1 - p), 1.0 / trials) / trials)

        m_grid = sorted(set(int(round(v)) for v in np.linspace(-2 * den, (den - num) * n, x_points)))
        alpha_result = AlphaAnalyzer.alpha_min(params.q, params.gamma)
        k_star, alpha = alpha_result.k_star, alpha_result.alpha_min

        transition_rows: List[AuditRow] = []
        ansatz_rows: List[AuditRow] = []
        for l in range(n + 1):
            for m in m_grid:
                empirical = tail(l, m)
                bound = alpha ** l * math.exp(-k_star * m / den)
                ansatz_rows.append(AuditRow(
                    kind="tail_bound", l=l, x=m / den, empirical=empirical, predicted=bound,
                    sigma=sigma(empirical), within=empirical <= bound + 3 * sigma(empirical) + 1.0 / trials
                ))
            if l == n:
                break
            alive = h[:, l]
            live_next = alive & (tests[:, l] == 0)
            test_next = alive & (tests[:, l] == 1)
            p_live = float(np.mean(correct[live_next, l])) if live_next.any() else 1.0
            p_test = float(np.mean(wins[test_next, l])) if test_next.any() else 0.0
            for m in m_grid:
                empirical = tail(l + 1, m)
                predicted = ((1 - q) * p_live * tail(l, m)
                             + q * p_test * tail(l, m - (den - num))
                             + q * (1 - p_test) * tail(l, m + num))
                spread = max(sigma(empirical), sigma(predicted))
                transition_rows.append(AuditRow(
                    kind="transition", l=l + 1, x=m / den, empirical=empirical, predicted=predicted,
                    sigma=spread, within=abs(empirical - predicted) <= 3 * spread + 1.0 / trials
                ))

        report = RecursionAuditReport(
            params=params.to_dict(), strategy=strategy.name, trials=trials, seed=seed,
            k_star=k_star, alpha=alpha, transition_rows=transition_rows, ansatz_rows=ansatz_rows
        )
        DebugUtils.info(
            f"Recursion audit: {report.transition_within_fraction:.3f} of transitions within 3 sigma, "
            f"tail bound {'holds' if report.ansatz_holds else 'violated'}"
        )
        return report
