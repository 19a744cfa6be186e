import math
from typing import List

import numpy as np

from config.settings import Settings
from constants.Constants import CHSH_CLASSICAL_MAX, CHSH_QUANTUM_MAX
from exceptions.wse_exceptions import ValidationException
from models.security_data import TradeoffPoint, StorageModel
from utils.debug_utils import DebugUtils
from .base_analyzer import BaseAnalyzer

class BoundsAnalyzer(BaseAnalyzer):
    """Closed-form min-entropy bounds and the (p_L, p_T) trade-off curve."""

    @staticmethod
    def h(x: float) -> float:
        """
        Min-entropy rate per round for absolute effective anticommutator x.

        h(x) = 1 - log2(1 + sqrt((1 + x) / 2))

        Args:
            x: Value in [0, 1]

        Returns:
            Rate in [0, 1 - log2(1 + 1/sqrt(2))], decreasing in x
        """
        x = BaseAnalyzer._validate_range("x", x, 0.0, 1.0)
        return 1.0 - math.log2(1.0 + math.sqrt((1.0 + x) / 2.0))

    @staticmethod
    def trusted_device_rate() -> float:
        """-log2(1/2 + 1/(2 sqrt 2)), the rate for trusted BB84 devices."""
        return -math.log2(0.5 + 1.0 / (2.0 * math.sqrt(2.0)))

    @staticmethod
    def eps_plus_max_from_beta(beta: float) -> float:
        """Largest ε₊ compatible with CHSH value beta: (β/4) sqrt(8 - β²)."""
        beta = BaseAnalyzer._validate_range(
            "beta", beta, CHSH_CLASSICAL_MAX, CHSH_QUANTUM_MAX, Settings.BOUND_SLACK_TOLERANCE
        )
        beta = BaseAnalyzer._clamp(beta, CHSH_CLASSICAL_MAX, CHSH_QUANTUM_MAX)
        return BaseAnalyzer._clamp((beta / 4.0) * math.sqrt(max(8.0 - beta ** 2, 0.0)), 0.0, 1.0)

    @staticmethod
    def f_of_beta(beta: float) -> float:
        """Min-entropy rate certified by CHSH value beta: h(eps_plus_max_from_beta(beta))."""
        return BoundsAnalyzer.h(BoundsAnalyzer.eps_plus_max_from_beta(beta))

    @staticmethod
    def min_entropy_rate_bounded(beta: float, d: int, n: int) -> float:
        """
        λ = f(β) - log2(d)/n for an adversary with d-dimensional quantum memory.

        A non-positive rate means the parameters certify nothing.
        """
        d = BaseAnalyzer._validate_positive_int("d", d)
        n = BaseAnalyzer._validate_positive_int("n", n)
        rate = BoundsAnalyzer.f_of_beta(beta) - math.log2(d) / n
        if rate <= 0:
            DebugUtils.debug(f"Bounded-storage rate insecure: beta={beta}, d={d}, n={n}, rate={rate:.6g}")
        return rate

    @staticmethod
    def guessing_probability_bound_bounded(beta: float, d: int, n: int) -> float:
        """Upper bound min(1, d 2^(-n f(β))) on guessing the whole string."""
        d = BaseAnalyzer._validate_positive_int("d", d)
        n = BaseAnalyzer._validate_positive_int("n", n)
        return min(1.0, d * 2.0 ** (-n * BoundsAnalyzer.f_of_beta(beta)))

    @staticmethod
    def storage_bit_budget(eps_plus: float, n: int, epsilon: float) -> int:
        """⌊n·h(ε₊) - log2(1/ε)⌋ clamped at 0."""
        n = BaseAnalyzer._validate_positive_int("n", n)
        epsilon = BaseAnalyzer._validate_range("epsilon", epsilon, 0.0, 1.0)
        if epsilon <= 0.0 or epsilon >= 1.0:
            raise ValidationException(f"epsilon must lie in (0, 1), got {epsilon}")
        bits = math.floor(n * BoundsAnalyzer.h(eps_plus) - math.log2(1.0 / epsilon))
        return max(bits, 0)

    @staticmethod
    def min_entropy_rate_noisy(eps_plus: float, n: int, epsilon: float, storage: StorageModel) -> float:
        """
        λ = -(1/n) log2 P_succ(⌊n·h(ε₊) - log2(1/ε)⌋) for a noisy-storage adversary.

        Args:
            eps_plus: Absolute effective anticommutator in [0, 1]
            n: Number of rounds
            epsilon: Smoothing parameter in (0, 1)
            storage: Storage model providing P_succ

        Returns:
            Non-negative rate; zero when the bit budget is exhausted
        """
        bits = BoundsAnalyzer.storage_bit_budget(eps_plus, n, epsilon)
        if bits == 0:
            return 0.0
        success = storage.success_probability(bits)
        return max(0.0, -math.log2(success) / n)

    @staticmethod
    def p_L_max(t: float) -> float:
        """Best live-round guessing probability 1/2 + sqrt(1+t)/(2 sqrt 2)."""
        t = BaseAnalyzer._validate_range("t", t, 0.0, 1.0)
        return 0.5 + math.sqrt(1.0 + t) / (2.0 * math.sqrt(2.0))

    @staticmethod
    def p_T_max(t: float) -> float:
        """Best test-round winning probability 1/2 + (sqrt(1+t) + sqrt(1-t))/(4 sqrt 2)."""
        t = BaseAnalyzer._validate_range("t", t, 0.0, 1.0)
        return 0.5 + (math.sqrt(1.0 + t) + math.sqrt(1.0 - t)) / (4.0 * math.sqrt(2.0))

    @staticmethod
    def uncertainty_bound(eps_plus: float) -> float:
        """Guessing bound against a classical adversary: 1/2 + ½ sqrt((1+ε₊)/2)."""
        eps_plus = BaseAnalyzer._validate_range("eps_plus", eps_plus, 0.0, 1.0)
        return 0.5 + 0.5 * math.sqrt((1.0 + eps_plus) / 2.0)

    @staticmethod
    def is_admissible(p_live: float, p_test: float, tolerance: float = Settings.BOUND_SLACK_TOLERANCE) -> bool:
        """
        Whether (p_L, p_T) lies on or below the trade-off curve.

        p_L fixes the smallest compatible t = max(0, 8(p_L - 1/2)² - 1); since
        p_T_max decreases in t the pair is admissible iff p_T <= p_T_max(t).
        """
        p_live = BaseAnalyzer._validate_range("p_live", p_live, 0.0, 1.0)
        p_test = BaseAnalyzer._validate_range("p_test", p_test, 0.0, 1.0)
        t_live = max(0.0, 8.0 * (p_live - 0.5) ** 2 - 1.0) if p_live > 0.5 else 0.0
        if t_live > 1.0 + tolerance:
            return False
        return p_test <= BoundsAnalyzer.p_T_max(min(t_live, 1.0)) + tolerance

    @staticmethod
    def tradeoff_point(t: float) -> TradeoffPoint:
        return TradeoffPoint(t=float(t), p_L=BoundsAnalyzer.p_L_max(t), p_T=BoundsAnalyzer.p_T_max(t))

    @staticmethod
    def tradeoff_curve(samples: int = Settings.DEFAULT_TRADEOFF_SAMPLES) -> List[TradeoffPoint]:
        """Trade-off points for t evenly spaced on [0, 1], endpoints included."""
        samples = BaseAnalyzer._validate_positive_int("samples", samples, minimum=2)
        return [BoundsAnalyzer.tradeoff_point(t) for t in np.linspace(0.0, 1.0, samples)]

    @staticmethod
    def beta_grid(samples: int = Settings.DEFAULT_CURVE_SAMPLES,
                  beta_min: float = CHSH_CLASSICAL_MAX,
                  beta_max: float = CHSH_QUANTUM_MAX) -> np.ndarray:
        """Evenly spaced CHSH values inside [2, 2 sqrt 2], endpoints included."""
        samples = BaseAnalyzer._validate_positive_int("samples", samples, minimum=2)
        low = BaseAnalyzer._validate_range("beta_min", beta_min, CHSH_CLASSICAL_MAX, CHSH_QUANTUM_MAX,
                                           Settings.BOUND_SLACK_TOLERANCE)
        high = BaseAnalyzer._validate_range("beta_max", beta_max, CHSH_CLASSICAL_MAX, CHSH_QUANTUM_MAX,
                                            Settings.BOUND_SLACK_TOLERANCE)
        if high <= low:
            raise ValidationException(f"beta_max must exceed beta_min, got [{low}, {high}]")
        grid = np.linspace(low, high, samples)
        return np.clip(grid, CHSH_CLASSICAL_MAX, CHSH_QUANTUM_MAX)

    @staticmethod
    def f_curve(samples: int = Settings.DEFAULT_CURVE_SAMPLES,
                beta_min: float = CHSH_CLASSICAL_MAX,
                beta_max: float = CHSH_QUANTUM_MAX) -> List[dict]:
        """Rows {beta, f_beta} over the CHSH grid."""
        return [{"beta": float(beta), "f_beta": BoundsAnalyzer.f_of_beta(beta)}
                for beta in BoundsAnalyzer.beta_grid(samples, beta_min, beta_max)]
