import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np

from config.settings import Settings
from constants.Constants import (
    CHECK_NAMES, CHSH_CLASSICAL_MAX, CHSH_QUANTUM_MAX, GAMMA_MIN, QUANTUM_WIN_PROBABILITY, VERIFY_SCALES,
    STRATEGY_CLASSICAL, STRATEGY_CURVE
)
from exceptions.wse_exceptions import ValidationException
from models.protocol_data import CheckResult, RoundRecord, VerificationReport
from models.security_data import TestParams
from services.analysis.alpha_analyzer import AlphaAnalyzer
from services.analysis.bounds_analyzer import BoundsAnalyzer
from services.analysis.chsh_analyzer import ChshAnalyzer
from services.analysis.guessing_analyzer import GuessingAnalyzer
from services.linalg.matrix_core import MatrixCore
from services.simulation.monte_carlo import MonteCarloSimulator
from services.simulation.protocol_simulator import ProtocolSimulator
from services.simulation.strategy_factory import StrategyFactory
from utils.debug_utils import DebugUtils

# cells kept away from gamma -> 1, where k* leaves the dense grid
ALPHA_CELLS = [(0.3, 0.9), (0.5, 0.85), (0.7, 0.8), (0.9, 0.95), (0.2, 0.78)]
TRADEOFF_K_VALUES = [0.5, 1.0, 2.0, 4.0]

class VerificationService:
    """Service for running the named self-checks of every analysis layer."""

    SAMPLE_COUNTS: Dict[str, Dict[str, int]] = {
        "quick": {
            "matrix_pairs": 30, "random_setups": 100, "saturation_angles": 10, "adversary_tables": 40,
            "product_tables": 20, "region_side": 3, "honest_runs": 500, "simulation_trials": 2000,
        },
        "full": {
            "matrix_pairs": 100, "random_setups": 1000, "saturation_angles": 50, "adversary_tables": 200,
            "product_tables": 100, "region_side": 9, "honest_runs": 10_000, "simulation_trials": 100_000,
        },
    }

    def __init__(self, scale: str = VERIFY_SCALES[0], seed: int = Settings.DEFAULT_SEED,
                 workers: Optional[int] = None):
        if scale not in self.SAMPLE_COUNTS:
            raise ValidationException(f"verify scale must be one of {VERIFY_SCALES}, got '{scale}'")
        self.scale = scale
        self.seed = seed
        self.workers = workers or Settings.worker_count()
        self.counts = self.SAMPLE_COUNTS[scale]

    def _rng(self, stream: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, stream])

    def checks(self) -> List[Callable[[], List[CheckResult]]]:
        return [
            self._check_matrix_identities,
            self._check_chsh,
            self._check_bounds,
            self._check_side_information,
            self._check_sequential_gap,
            self._check_guessing,
            self._check_alpha,
            self._check_protocol,
            self._check_simulation,
        ]

    def run(self) -> VerificationReport:
        """Run every check group and collect the named results."""
        DebugUtils.info(f"Running verification at {self.scale} scale, seed={self.seed}")
        results: List[CheckResult] = []
        for group in self.checks():
            for result in group():
                log = DebugUtils.info if result.passed else DebugUtils.error
                log(f"{result.name}: {'pass' if result.passed else 'FAIL'} {result.detail}")
                results.append(result)
        report = VerificationReport(scale=self.scale, checks=results)
        DebugUtils.info(f"Verification {'passed' if report.passed else 'failed'}: "
                        f"{sum(c.passed for c in results)}/{len(results)} checks")
        return report

    @staticmethod
    def _result(key: str, passed: bool, detail: str = "") -> CheckResult:
        return CheckResult(name=CHECK_NAMES[key], passed=bool(passed), detail=detail)

    def _check_matrix_identities(self) -> List[CheckResult]:
        rng = self._rng(1)
        worst_identity, worst_eigen = 0.0, -np.inf
        for _ in range(self.counts["matrix_pairs"]):
            dim = int(rng.integers(2, 5))
            a, b = MatrixCore.random_hermitian(rng, dim), MatrixCore.random_hermitian(rng, dim)
            plus = MatrixCore.operator_abs(MatrixCore.hermitize(a.entries + b.entries)).entries
            minus = MatrixCore.operator_abs(MatrixCore.hermitize(a.entries - b.entries)).entries
            residual = plus @ plus + minus @ minus - 2 * (a.entries @ a.entries + b.entries @ b.entries)
            worst_identity = max(worst_identity, float(np.max(np.abs(residual))))

            a, b = MatrixCore.random_observable(rng, dim), MatrixCore.random_observable(rng, dim)
            anti = MatrixCore.operator_abs(MatrixCore.anticommutator(a, b)).entries
            comm = MatrixCore.modulus(MatrixCore.commutator(a, b)).entries
            total = MatrixCore.hermitize(anti @ anti + comm @ comm)
            worst_eigen = max(worst_eigen, float(MatrixCore.hermitian_eig(total)[0][0]))
        return [
            self._result("matrix_modulus_identity", worst_identity <= Settings.BOUND_SLACK_TOLERANCE,
                         f"max residual {worst_identity:.3e}"),
            self._result("matrix_operator_inequality", worst_eigen <= 4.0 + Settings.BOUND_SLACK_TOLERANCE,
                         f"max eigenvalue {worst_eigen:.12g}"),
        ]

    def _check_chsh(self) -> List[CheckResult]:
        beta = ChshAnalyzer.chsh_value(ChshAnalyzer.ideal_setup())
        rng = self._rng(2)
        worst_slack, chains_monotone = np.inf, True
        for _ in range(self.counts["random_setups"]):
            setup = ChshAnalyzer.random_setup(rng)
            worst_slack = min(worst_slack, ChshAnalyzer.verify_beta_eps_bound(setup).slack)
            chains_monotone = chains_monotone and ChshAnalyzer.bound_chain(setup).is_monotone()

        saturated = True
        for theta in np.linspace(math.pi / 2, 0.05, self.counts["saturation_angles"]):
            setup = ChshAnalyzer.saturating_setup(theta)
            report = ChshAnalyzer.verify_beta_eps_bound(setup)
            closed = ChshAnalyzer.optimal_bob_value(*ChshAnalyzer.alice_bloch_vectors(theta))
            saturated = saturated and report.saturated and abs(report.beta - closed) <= Settings.SATURATION_TOLERANCE
        return [
            self._result("chsh_ideal_value", abs(beta - CHSH_QUANTUM_MAX) <= Settings.IDENTITY_TOLERANCE,
                         f"beta={beta:.12g}"),
            self._result("chsh_bound_random",
                         worst_slack >= -Settings.BOUND_SLACK_TOLERANCE and chains_monotone,
                         f"min slack {worst_slack:.3e}, chains monotone={chains_monotone}"),
            self._result("chsh_saturation", saturated, f"{self.counts['saturation_angles']} angles"),
        ]

    def _check_bounds(self) -> List[CheckResult]:
        anchor = BoundsAnalyzer.h(0.0)
        anchor_ok = (abs(anchor - 0.2284) <= 1e-4
                     and abs(BoundsAnalyzer.trusted_device_rate() - anchor) <= Settings.CONSTRUCTION_TOLERANCE)

        values = [row["f_beta"] for row in BoundsAnalyzer.f_curve(200)]
        curve_ok = (BoundsAnalyzer.f_of_beta(CHSH_CLASSICAL_MAX) == 0.0
                    and all(b > a for a, b in zip(values, values[1:]))
                    and abs(BoundsAnalyzer.f_of_beta(CHSH_QUANTUM_MAX) - anchor) <= Settings.CONSTRUCTION_TOLERANCE)

        worst_roundtrip = max(
            abs(BoundsAnalyzer.eps_plus_max_from_beta(ChshAnalyzer.bound_rhs(eps)) - eps)
            for eps in np.linspace(0.0, 1.0, 101)
        )

        top, bottom = BoundsAnalyzer.tradeoff_point(1.0), BoundsAnalyzer.tradeoff_point(0.0)
        tradeoff_ok = (
            abs(top.p_L - 1.0) <= Settings.CONSTRUCTION_TOLERANCE
            and abs(top.p_T - 0.75) <= Settings.CONSTRUCTION_TOLERANCE
            and abs(bottom.p_L - QUANTUM_WIN_PROBABILITY) <= Settings.CONSTRUCTION_TOLERANCE
            and abs(bottom.p_T - QUANTUM_WIN_PROBABILITY) <= Settings.CONSTRUCTION_TOLERANCE
        )
        return [
            self._result("bounds_trusted_anchor", anchor_ok, f"h(0)={anchor:.6g}"),
            self._result("bounds_f_curve", curve_ok, "200-point grid"),
            self._result("bounds_roundtrip", worst_roundtrip <= Settings.BOUND_SLACK_TOLERANCE,
                         f"max error {worst_roundtrip:.3e}"),
            self._result("bounds_tradeoff", tradeoff_ok,
                         f"t=1: ({top.p_L:.6g}, {top.p_T:.6g}); t=0: ({bottom.p_L:.6g}, {bottom.p_T:.6g})"),
        ]

    def _check_side_information(self) -> List[CheckResult]:
        example = GuessingAnalyzer.side_information_example()
        table = example["table"]
        exact = GuessingAnalyzer.exact_probability
        eps_eff, eps_plus = exact(example["eps_eff"]), exact(example["eps_plus"])
        with_k = exact(GuessingAnalyzer.pguess_postmeas_classical(table).p_guess)
        without_k = exact(GuessingAnalyzer.pguess_classical(table, target=("x",), given=("theta",)).p_guess)
        return [
            self._result("side_info_eps_eff", eps_eff == 0, f"side information: eps_eff={eps_eff}"),
            self._result("side_info_eps_plus", eps_plus == 1, f"side information: eps_plus={eps_plus}"),
            self._result("side_info_pguess_k", with_k == 1, f"side information: P_guess(X|K,Theta)={with_k}"),
            self._result("side_info_pguess", without_k == Fraction(3, 4),
                         f"side information: P_guess(X|Theta)={without_k}"),
        ]

    def _check_sequential_gap(self) -> List[CheckResult]:
        distribution = GuessingAnalyzer.sequential_gap_distribution()
        targets, advice = ("x1", "x2"), ((), ("theta2",))
        general = GuessingAnalyzer.pguess_general(distribution, targets, advice).p_guess
        sequential = GuessingAnalyzer.pguess_sequential(distribution, targets, advice).p_guess
        exhaustive = GuessingAnalyzer.pguess_sequential_exhaustive(distribution, targets, advice)
        split = GuessingAnalyzer.conditioning_identity_check(distribution, targets, advice)
        p_event = GuessingAnalyzer.exact_probability(split.p_event)
        p_last = GuessingAnalyzer.exact_probability(split.p_last_given_event)
        return [
            self._result("gap_general", Fraction(general) == Fraction(1, 2), f"sequential gap: general={general}"),
            self._result("gap_sequential",
                         Fraction(sequential) == Fraction(3, 8) and Fraction(exhaustive) == Fraction(3, 8),
                         f"sequential gap: dp={sequential}, exhaustive={exhaustive}"),
            self._result("gap_conditioning",
                         split.holds and p_event == Fraction(1, 2) and p_last == Fraction(3, 4),
                         f"sequential gap: {split.p_sequential} = {p_event} * {p_last}"),
        ]

    def _check_guessing(self) -> List[CheckResult]:
        rng = self._rng(3)
        worst_additivity = 0.0
        for _ in range(self.counts["product_tables"]):
            first = GuessingAnalyzer.random_distribution(rng, ("x1", "y1"), (2, 3))
            second = GuessingAnalyzer.random_distribution(rng, ("x2", "y2"), (3, 2))
            joint = GuessingAnalyzer.product_distribution(first, second)
            h_joint = GuessingAnalyzer.pguess_classical(joint, target=("x1", "x2"), given=("y1", "y2")).h_min
            h_sum = GuessingAnalyzer.pguess_classical(first).h_min + GuessingAnalyzer.pguess_classical(second).h_min
            worst_additivity = max(worst_additivity, abs(h_joint - h_sum))

        rng = self._rng(4)
        worst_margin = np.inf
        for _ in range(self.counts["adversary_tables"]):
            table, eps_plus = GuessingAnalyzer.random_classical_adversary_table(rng)
            p_guess = GuessingAnalyzer.pguess_postmeas_classical(table).p_guess
            worst_margin = min(worst_margin, BoundsAnalyzer.uncertainty_bound(eps_plus) - p_guess)

        worst_gap = 0.0
        for theta in np.linspace(math.pi / 2, 0.1, 5):
            setup = ChshAnalyzer.saturating_setup(theta)
            table = GuessingAnalyzer.postmeasurement_table(setup.rho_ab, setup.dims, setup.a0, setup.a1, setup.b0)
            eps_plus = ChshAnalyzer.absolute_effective_anticommutator(
                setup.a0, setup.a1, ChshAnalyzer.reduced_state_a(setup)
            )
            p_guess = GuessingAnalyzer.pguess_postmeas_classical(table).p_guess
            worst_gap = max(worst_gap, abs(BoundsAnalyzer.uncertainty_bound(eps_plus) - p_guess))
        return [
            self._result("guessing_additivity", worst_additivity <= Settings.IDENTITY_TOLERANCE,
                         f"max deviation {worst_additivity:.3e}"),
            self._result("guessing_uncertainty_random", worst_margin >= -Settings.BOUND_SLACK_TOLERANCE,
                         f"min margin {worst_margin:.3e}"),
            self._result("guessing_uncertainty_saturation", worst_gap <= Settings.SATURATION_TOLERANCE,
                         f"max gap {worst_gap:.3e}"),
        ]

    def _check_alpha(self) -> List[CheckResult]:
        worst_zero = max(
            abs(AlphaAnalyzer.alpha(q, gamma, 0.0) - 1.0)
            for q in np.linspace(0.0, 1.0, 20) for gamma in np.linspace(GAMMA_MIN, 1.0, 20)
        )
        worst_closed = max(
            abs(AlphaAnalyzer.alpha(q, gamma, k) - AlphaAnalyzer.grid_maximum(q, gamma, k, points=10_000))
            for q, gamma in ALPHA_CELLS for k in TRADEOFF_K_VALUES
        )
        worst_taylor = max(
            abs(AlphaAnalyzer.taylor_slope(q, gamma) - AlphaAnalyzer.expected_taylor_slope(q, gamma))
            for q, gamma in ALPHA_CELLS
        )
        worst_golden = max(
            abs(AlphaAnalyzer.alpha_min(q, gamma).alpha_min - AlphaAnalyzer.grid_alpha_min(q, gamma)[0])
            for q, gamma in ALPHA_CELLS
        )

        side = self.counts["region_side"]
        boundary = [AlphaAnalyzer.alpha_min(0.0, gamma).alpha_min for gamma in np.linspace(GAMMA_MIN, 1.0, 6)]
        boundary += [AlphaAnalyzer.alpha_min(q, GAMMA_MIN).alpha_min for q in np.linspace(0.0, 1.0, 6)]
        boundary_ok = all(abs(v - 1.0) <= Settings.BOUND_SLACK_TOLERANCE for v in boundary)
        interior_ok = AlphaAnalyzer.security_region_check(np.linspace(0.1, 0.9, side), np.linspace(0.76, 0.99, side))
        return [
            self._result("alpha_g_zero", worst_zero <= Settings.CONSTRUCTION_TOLERANCE, f"max |g-1| {worst_zero:.3e}"),
            self._result("alpha_closed_form", worst_closed <= 1e-7, f"max gap {worst_closed:.3e}"),
            self._result("alpha_taylor", worst_taylor <= 1e-4, f"max error {worst_taylor:.3e}"),
            self._result("alpha_golden", worst_golden <= 1e-7, f"max gap {worst_golden:.3e}"),
            self._result("alpha_region", boundary_ok and interior_ok,
                         f"boundary={boundary_ok}, interior {side}x{side}={interior_ok}"),
        ]

    @staticmethod
    def threshold_tie_holds() -> bool:
        """At gamma = 17/20 and 20 test rounds, 17 wins must pass and 16 must abort."""
        def rounds(wins: int) -> List[RoundRecord]:
            return [RoundRecord(index=j, q=1, theta=0, x=0, t=0, y=0 if j < wins else 1) for j in range(20)]

        gamma = Fraction(17, 20)
        tie = ProtocolSimulator.build_transcript(rounds(17), gamma)
        below = ProtocolSimulator.build_transcript(rounds(16), gamma)
        empty = ProtocolSimulator.build_transcript([], gamma)
        return tie.passed and not below.passed and empty.passed and empty.vacuous_pass

    def _check_protocol(self) -> List[CheckResult]:
        runs = self.counts["honest_runs"]
        n = 8
        agreement, sizes = True, []
        for trial in range(runs):
            run = ProtocolSimulator.run_honest(n, self.seed, trial_index=trial)
            agreement = agreement and run.agreement_on_index_set()
            sizes.append(len(run.index_set))
        mean_size = float(np.mean(sizes))
        band = 3.0 * math.sqrt(n * 0.25 / runs)

        uniform = True
        for size in range(1, 5):
            distribution = ProtocolSimulator.honest_bob_uniformity(size)
            uniform = uniform and len(distribution) == 2 ** size and all(
                p == Fraction(1, 2 ** size) for p in distribution.values()
            )
        return [
            self._result("protocol_tie", self.threshold_tie_holds(), "gamma=17/20, R=20"),
            self._result("protocol_honest", agreement and abs(mean_size - n / 2) <= band,
                         f"{runs} runs, mean |I|={mean_size:.4g}"),
            self._result("protocol_uniformity", uniform, "n=1..4"),
        ]

    def _check_simulation(self) -> List[CheckResult]:
        params = TestParams(q=0.5, gamma=0.85, n=20)
        trials = self.counts["simulation_trials"]
        details, passed = [], True
        for name, kwargs in ((STRATEGY_CLASSICAL, {}), (STRATEGY_CURVE, {"q": params.q, "gamma": params.gamma})):
            strategy = StrategyFactory.get_strategy(name, **kwargs)
            report = MonteCarloSimulator.monte_carlo_failure(params, strategy, trials, self.seed, self.workers)
            ok = report.ci_high <= report.bound and report.factorization_exact
            passed = passed and ok
            details.append(f"{name}: p_hat={report.p_hat:.4g} ci_high={report.ci_high:.4g} bound={report.bound:.4g}")
        return [self._result("simulation_bound", passed, "; ".join(details))]
