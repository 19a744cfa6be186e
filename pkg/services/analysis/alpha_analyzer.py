import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from config.settings import Settings
from constants.Constants import GAMMA_MIN, GAMMA_MAX, SQRT2
from exceptions.wse_exceptions import ValidationException
from models.security_data import TestParams, AlphaResult
from utils.debug_utils import DebugUtils
from .base_analyzer import BaseAnalyzer

PHI_RATIO = 2 / (1 + math.sqrt(5))

def golden_section_minimize(f: Callable[[float], float], lower: float, upper: float,
                            tol: float = Settings.K_TOLERANCE,
                            max_iterations: int = Settings.GOLDEN_MAX_ITERATIONS) -> Dict[str, float]:
    """
    Golden-section search for the minimum of a unimodal function on [lower, upper].

    The bracket endpoints are compared against the interior estimate at the
    end, the lower endpoint winning ties.

    Returns:
        dict with argmin, minimum, iterations, evaluations and converged
    """
    x1 = upper - PHI_RATIO * (upper - lower)
    x2 = lower + PHI_RATIO * (upper - lower)
    f1, f2 = f(x1), f(x2)
    f_lower, f_upper = f(lower), f(upper)
    lower0, upper0 = lower, upper
    evaluations = 4
    iteration = 0
    while iteration < max_iterations and abs(upper - lower) > tol:
        if f2 > f1:
            upper, x2, f2 = x2, x1, f1
            x1 = upper - PHI_RATIO * (upper - lower)
            f1 = f(x1)
        else:
            lower, x1, f1 = x1, x2, f2
            x2 = lower + PHI_RATIO * (upper - lower)
            f2 = f(x2)
        evaluations += 1
        iteration += 1

    if f1 <= f2:
        argmin, minimum = x1, f1
    else:
        argmin, minimum = x2, f2
    if f_lower <= minimum:
        argmin, minimum = lower0, f_lower
    elif f_upper < minimum:
        argmin, minimum = upper0, f_upper

    return dict(
        iterations=iteration,
        evaluations=evaluations,
        argmin=argmin,
        minimum=minimum,
        converged=not (math.isnan(f1) or math.isnan(f2) or abs(upper - lower) > tol)
    )

class AlphaAnalyzer(BaseAnalyzer):
    """Decay rate of the failure probability under sequential attacks."""

    @staticmethod
    def _validate_q_gamma(q: float, gamma: float) -> Tuple[float, float]:
        q = BaseAnalyzer._validate_range("q", q, 0.0, 1.0)
        gamma = BaseAnalyzer._validate_range("gamma", gamma, GAMMA_MIN, GAMMA_MAX)
        return q, gamma

    @staticmethod
    def _validate_k(k: float) -> float:
        try:
            k = float(k)
        except (TypeError, ValueError):
            raise ValidationException(f"k must be a real number, got {k!r}")
        if math.isnan(k) or k < 0:
            raise ValidationException(f"k must be non-negative, got {k}")
        return k

    @staticmethod
    def _exponentials(gamma: float, k):
        """(e^{k(1-γ)}, e^{-kγ}); overflow saturates to inf."""
        with np.errstate(over="ignore"):
            return np.exp(np.multiply(k, 1.0 - gamma)), np.exp(np.multiply(-k, gamma))

    @staticmethod
    def coefficients(q: float, gamma: float, k: float) -> Tuple[float, float, float]:
        """
        Coefficients of sqrt(1+t), sqrt(1-t) and 1 in the one-round objective.

        A = [2(1-q) + q e^{-kγ}(e^k - 1)] / (4 sqrt 2)
        B = q e^{-kγ}(e^k - 1) / (4 sqrt 2)
        C = (1-q)/2 + q e^{-kγ}(e^k + 1) / 2
        """
        q, gamma = AlphaAnalyzer._validate_q_gamma(q, gamma)
        k = AlphaAnalyzer._validate_k(k)
        a, b, c = AlphaAnalyzer._coefficient_arrays(q, gamma, k)
        return float(a), float(b), float(c)

    @staticmethod
    def _coefficient_arrays(q: float, gamma: float, k):
        grow, decay = AlphaAnalyzer._exponentials(gamma, k)
        spread = q * (grow - decay)
        a = (2.0 * (1.0 - q) + spread) / (4.0 * SQRT2)
        b = spread / (4.0 * SQRT2)
        c = (1.0 - q) / 2.0 + q * (grow + decay) / 2.0
        return a, b, c

    @staticmethod
    def _g_values(q: float, gamma: float, k) -> np.ndarray:
        a, b, c = AlphaAnalyzer._coefficient_arrays(q, gamma, np.asarray(k, dtype=float))
        with np.errstate(over="ignore", invalid="ignore"):
            return np.sqrt(2.0 * (a ** 2 + b ** 2)) + c

    @staticmethod
    def g(q: float, gamma: float, k: float) -> Tuple[float, float]:
        """
        Maximum over the trade-off curve of the one-round objective at fixed k.

        Returns:
            (value, t_star) with value = sqrt(2(A² + B²)) + C and
            t_star = (A² - B²)/(A² + B²), or 1 when A = B = 0
        """
        a, b, c = AlphaAnalyzer.coefficients(q, gamma, k)
        norm = a ** 2 + b ** 2
        t_star = (a ** 2 - b ** 2) / norm if norm > 0 else 1.0
        return math.sqrt(2.0 * norm) + c, BaseAnalyzer._clamp(t_star, 0.0, 1.0)

    @staticmethod
    def alpha(q: float, gamma: float, k: float) -> float:
        return AlphaAnalyzer.g(q, gamma, k)[0]

    @staticmethod
    def raw_objective(q: float, gamma: float, k: float, t) -> np.ndarray:
        """(1-q) p_L(t) + q e^{k(1-γ)} p_T(t) + q e^{-kγ} (1 - p_T(t)), vectorised over t."""
        q, gamma = AlphaAnalyzer._validate_q_gamma(q, gamma)
        k = AlphaAnalyzer._validate_k(k)
        t = np.asarray(t, dtype=float)
        p_l = 0.5 + np.sqrt(1.0 + t) / (2.0 * SQRT2)
        p_t = 0.5 + (np.sqrt(1.0 + t) + np.sqrt(1.0 - t)) / (4.0 * SQRT2)
        grow, decay = AlphaAnalyzer._exponentials(gamma, k)
        return (1.0 - q) * p_l + q * grow * p_t + q * decay * (1.0 - p_t)

    @staticmethod
    def grid_maximum(q: float, gamma: float, k: float, points: int = 200) -> float:
        """Max of the raw objective over an evenly spaced t grid on [0, 1]."""
        return float(np.max(AlphaAnalyzer.raw_objective(q, gamma, k, np.linspace(0.0, 1.0, points))))

    @staticmethod
    def _bracket(q: float, gamma: float) -> Tuple[float, float, bool, int]:
        """Doubling bracket [low, high] around the minimiser of g, starting from g(0) = 1."""
        objective = lambda k: float(AlphaAnalyzer._g_values(q, gamma, k))
        previous_k, previous_g = 0.0, objective(0.0)
        low = 0.0
        current_k = Settings.K_INITIAL_STEP
        current_g = objective(current_k)
        evaluations = 2
        # plateaus keep doubling; at gamma = 1 g only flattens out in floating point
        while current_g <= previous_g:
            next_k = 2.0 * current_k
            if next_k > Settings.K_SEARCH_CEILING:
                return previous_k, current_k, False, evaluations
            next_g = objective(next_k)
            evaluations += 1
            low, previous_k, previous_g = previous_k, current_k, current_g
            current_k, current_g = next_k, next_g
        return low, current_k, True, evaluations

    @staticmethod
    def alpha_min(q: float, gamma: float) -> AlphaResult:
        """
        Minimise alpha(q, gamma, k) over k >= 0.

        The minimiser is bracketed by doubling from k = 0 until g stops
        decreasing, then located by golden-section search. When g keeps
        decreasing up to the k ceiling (as it does for gamma = 1) the smallest
        value seen is returned with converged=False; it is still a valid bound.

        Args:
            q: Test probability in [0, 1]
            gamma: CHSH threshold in [3/4, 1]

        Returns:
            AlphaResult with alpha_min in (0, 1]
        """
        q, gamma = AlphaAnalyzer._validate_q_gamma(q, gamma)
        degenerate = q == 1.0
        if degenerate:
            DebugUtils.warning("q = 1 leaves no live rounds; alpha_min is reported but the bound is vacuous")

        if q == 0.0 or gamma == GAMMA_MIN:
            return AlphaResult(q=q, gamma=gamma, alpha_min=1.0, k_star=0.0,
                               t_star=AlphaAnalyzer.g(q, gamma, 0.0)[1],
                               converged=True, degenerate=degenerate, evaluations=1)

        objective = lambda k: float(AlphaAnalyzer._g_values(q, gamma, k))
        low, high, bracketed, evaluations = AlphaAnalyzer._bracket(q, gamma)

        if not bracketed:
            DebugUtils.warning(
                f"k search hit the ceiling {Settings.K_SEARCH_CEILING:g} for q={q}, gamma={gamma}; "
                f"returning the smallest value found"
            )
            value, t_star = AlphaAnalyzer.g(q, gamma, high)
            return AlphaResult(q=q, gamma=gamma, alpha_min=min(value, 1.0), k_star=high, t_star=t_star,
                               converged=False, degenerate=degenerate,
                               evaluations=evaluations + 1, bracket=(low, high))

        search = golden_section_minimize(objective, low, high)
        k_star, value = search["argmin"], search["minimum"]
        if objective(0.0) <= value:
            k_star, value = 0.0, objective(0.0)
        t_star = AlphaAnalyzer.g(q, gamma, k_star)[1]
        if not search["converged"]:
            DebugUtils.warning(f"Golden-section search did not converge for q={q}, gamma={gamma}")
        DebugUtils.debug(f"alpha_min(q={q}, gamma={gamma}) = {value:.12g} at k={k_star:.6g}")
        return AlphaResult(q=q, gamma=gamma, alpha_min=min(value, 1.0), k_star=k_star, t_star=t_star,
                           converged=bool(search["converged"]), degenerate=degenerate,
                           evaluations=evaluations + search["evaluations"], bracket=(low, high))

    @staticmethod
    def grid_alpha_min(q: float, gamma: float, k_max: float = 50.0, points: int = 100_000) -> Tuple[float, float]:
        """Dense k-grid minimum of g on [0, k_max]; returns (minimum, argmin)."""
        q, gamma = AlphaAnalyzer._validate_q_gamma(q, gamma)
        ks = np.linspace(0.0, k_max, points)
        values = AlphaAnalyzer._g_values(q, gamma, ks)
        index = int(np.nanargmin(values))
        return float(values[index]), float(ks[index])

    @staticmethod
    def failure_bound(params: TestParams) -> float:
        """[alpha_min(q, gamma)]^n."""
        if params.n == 0:
            return 1.0
        return AlphaAnalyzer.alpha_min(params.q, params.gamma).alpha_min ** params.n

    @staticmethod
    def taylor_slope(q: float, gamma: float, step: float = Settings.TAYLOR_STEP) -> float:
        """One-sided second-order finite-difference estimate of g'(0+)."""
        q, gamma = AlphaAnalyzer._validate_q_gamma(q, gamma)
        if q >= 1.0:
            raise ValidationException("Taylor slope is defined for q < 1")
        g0, g1, g2 = AlphaAnalyzer._g_values(q, gamma, np.array([0.0, step, 2.0 * step]))
        return float((-3.0 * g0 + 4.0 * g1 - g2) / (2.0 * step))

    @staticmethod
    def expected_taylor_slope(q: float, gamma: float) -> float:
        """(3/4 - gamma) q."""
        q, gamma = AlphaAnalyzer._validate_q_gamma(q, gamma)
        return (0.75 - gamma) * q

    @staticmethod
    def descent_ascent_transitions(q: float, gamma: float, k_max: float = 50.0, points: int = 1000) -> int:
        """Number of descending-to-ascending turns of g on a k grid; unimodal g has at most one."""
        values = AlphaAnalyzer._g_values(q, gamma, np.linspace(0.0, k_max, points))
        steps = np.diff(values)
        # ignore round-off plateaus
        signs = np.sign(np.where(np.abs(steps) <= 1e-14 * np.abs(values[1:]), 0.0, steps))
        signs = signs[signs != 0]
        return int(np.sum((signs[:-1] < 0) & (signs[1:] > 0)))

    @staticmethod
    def alpha_min_grid(q_values: Sequence[float], gamma_values: Sequence[float],
                       workers: int = 1) -> List[AlphaResult]:
        """
        alpha_min over the (q, gamma) product grid, q-major order.

        Cells run on up to `workers` threads; output order never depends on it.
        """
        cells = [(float(q), float(gamma)) for q in q_values for gamma in gamma_values]
        DebugUtils.info(f"Computing alpha_min on {len(cells)} grid cells with {workers} worker(s)")
        if workers <= 1:
            return [AlphaAnalyzer.alpha_min(q, gamma) for q, gamma in cells]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(lambda cell: AlphaAnalyzer.alpha_min(*cell), cells))

    @staticmethod
    def security_region_check(q_values: Iterable[float], gamma_values: Iterable[float],
                              margin: float = Settings.SATURATION_TOLERANCE) -> bool:
        """True when alpha_min < 1 - margin on every cell of the grid."""
        results = AlphaAnalyzer.alpha_min_grid(list(q_values), list(gamma_values))
        failing = [r for r in results if not r.alpha_min < 1.0 - margin]
        for result in failing:
            DebugUtils.warning(f"alpha_min not below 1 at q={result.q}, gamma={result.gamma}: {result.alpha_min}")
        return not failing
