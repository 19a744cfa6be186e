import itertools
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from config.settings import Settings
from constants.Constants import SIGMA_Z
from exceptions.wse_exceptions import (
    DistributionException, DimensionMismatchException, SizeGuardException, ValidationException
)
from models.distribution import JointDistribution, GuessReport, ConditioningReport
from models.operators import HermitianOperator, DensityMatrix
from services.linalg.matrix_core import MatrixCore
from utils.debug_utils import DebugUtils
from .base_analyzer import BaseAnalyzer
from .chsh_analyzer import ChshAnalyzer

AdviceGroups = Sequence[Sequence[str]]

class GuessingAnalyzer(BaseAnalyzer):
    """Exact guessing-probability oracles over classical joint distributions."""

    @staticmethod
    def _split(distribution: JointDistribution, target, given) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
        if target is None:
            target = distribution.names[:1]
        elif isinstance(target, str):
            target = (target,)
        if given is None:
            given = tuple(n for n in distribution.names if n not in target)
        elif isinstance(given, str):
            given = (given,)
        target, given = tuple(target), tuple(given)
        if not target:
            raise DistributionException("At least one target variable is required")
        if set(target) & set(given):
            raise DistributionException(f"Target {target} and conditioning {given} overlap")
        return target, given

    @staticmethod
    def _symbols(distribution: JointDistribution, names: Sequence[str]) -> List[Tuple[Any, ...]]:
        """Symbol tuples of the product alphabet of names, in row-major order."""
        return list(itertools.product(*[distribution.alphabet(n) for n in names]))

    @staticmethod
    def _unwrap(symbols: Tuple[Any, ...]):
        return symbols[0] if len(symbols) == 1 else symbols

    @staticmethod
    def pguess_classical(distribution: JointDistribution, target=None, given=None) -> GuessReport:
        """
        p_guess(X|Y) = Σ_y max_x P(x, y).

        Args:
            distribution: Joint table
            target: Variable(s) to guess; defaults to the first variable
            given: Conditioning variable(s); defaults to all remaining variables

        Returns:
            GuessReport whose strategy maps each value of the conditioning
            variables to the lowest-index maximising guess
        """
        target, given = GuessingAnalyzer._split(distribution, target, given)
        joint = distribution.marginal(target + given).probabilities
        n_target = int(np.prod(joint.shape[:len(target)]))
        table = joint.reshape(n_target, -1)
        best = np.argmax(table, axis=0)
        p_guess = float(np.sum(table[best, np.arange(table.shape[1])]))

        guesses = GuessingAnalyzer._symbols(distribution, target)
        strategy = {
            values: GuessingAnalyzer._unwrap(guesses[index])
            for values, index in zip(GuessingAnalyzer._symbols(distribution, given), best)
        }
        return GuessReport.from_probability(p_guess, strategy, target, given)

    @staticmethod
    def pguess_postmeas_classical(distribution: JointDistribution, target: str = "x",
                                  basis: str = "theta", outcome: str = "k") -> GuessReport:
        """p_guess(X|KΘ): guessing from a fixed measurement outcome K plus the announced basis."""
        return GuessingAnalyzer.pguess_classical(distribution, target=(target,), given=(outcome, basis))

    @staticmethod
    def replay_strategy(distribution: JointDistribution, strategy: Dict[Any, Any], target=None, given=None) -> float:
        """Success probability of a guess table {conditioning values: guess} on the distribution."""
        target, given = GuessingAnalyzer._split(distribution, target, given)
        success = 0.0
        for values in GuessingAnalyzer._symbols(distribution, given):
            guess = strategy[values]
            guess = guess if isinstance(guess, tuple) else (guess,)
            assignment = dict(zip(given, values))
            assignment.update(zip(target, guess))
            success += distribution.probability(assignment)
        return success

    @staticmethod
    def min_entropy(p_guess: float) -> float:
        """-log2 p_guess."""
        p_guess = BaseAnalyzer._validate_range("p_guess", p_guess, 0.0, 1.0, Settings.CONSTRUCTION_TOLERANCE)
        if p_guess <= 0.0:
            raise ValidationException("Guessing probability must be positive")
        return max(0.0, -float(np.log2(p_guess)))

    @staticmethod
    def coarse_grain_by_guess_function(distribution: JointDistribution, target: str = "x",
                                       basis: str = "theta", outcome: str = "k") -> JointDistribution:
        """
        Merge outcomes K that induce the same optimal guess function basis -> guess.

        The new variable "g" is labelled by the guess function it stands for,
        e.g. "g=0,1" guesses 0 for the first basis value and 1 for the second;
        guessing from (g, basis) is as good as guessing from (K, basis).
        """
        table = distribution.marginal((target, basis, outcome)).probabilities
        target_alphabet = distribution.alphabet(target)
        labels: List[str] = []
        rows: Dict[Tuple[Any, Any, str], float] = {}
        for k_index in range(table.shape[2]):
            guesses = np.argmax(table[:, :, k_index], axis=0)
            label = "g=" + ",".join(str(target_alphabet[i]) for i in guesses)
            if label not in labels:
                labels.append(label)
            for x_index, x in enumerate(target_alphabet):
                for b_index, b in enumerate(distribution.alphabet(basis)):
                    key = (x, b, label)
                    rows[key] = rows.get(key, 0.0) + float(table[x_index, b_index, k_index])
        return JointDistribution.from_mapping(
            (target, basis, "g"), (target_alphabet, distribution.alphabet(basis), labels), rows
        )

    @staticmethod
    def _round_tensor(distribution: JointDistribution, targets: Sequence[str],
                      advice: AdviceGroups) -> np.ndarray:
        """
        Table reordered to axes (Y_1, X_1, Y_2, X_2, ...), each advice group fused
        into one axis; an empty group becomes an axis of size one.
        """
        targets = tuple(targets)
        if len(advice) != len(targets):
            raise DistributionException(f"Need one advice group per round: {len(targets)} rounds, {len(advice)} groups")
        order: List[str] = []
        for name, group in zip(targets, advice):
            order.extend(group)
            order.append(name)
        if len(set(order)) != len(order):
            raise DistributionException(f"Each variable may appear once across targets and advice: {order}")
        table = distribution.marginal(order).probabilities
        shape: List[int] = []
        for name, group in zip(targets, advice):
            shape.append(int(np.prod([len(distribution.alphabet(g)) for g in group])) if group else 1)
            shape.append(len(distribution.alphabet(name)))
        return table.reshape(shape)

    @staticmethod
    def _check_dp_size(tensor: np.ndarray) -> None:
        nodes, level = 0, 1
        for j in range(0, tensor.ndim, 2):
            level *= tensor.shape[j] * tensor.shape[j + 1]
            nodes += level
        if nodes > Settings.SEQUENTIAL_DP_MAX_NODES:
            DebugUtils.error(f"Sequential guessing table needs {nodes} nodes")
            raise SizeGuardException(
                f"Sequential guessing needs {nodes} nodes, guard is {Settings.SEQUENTIAL_DP_MAX_NODES}"
            )

    @staticmethod
    def _advice_symbols(distribution: JointDistribution, group: Sequence[str]) -> List[Tuple[Any, ...]]:
        return GuessingAnalyzer._symbols(distribution, group) if group else [()]

    @staticmethod
    def pguess_sequential(distribution: JointDistribution, targets: Sequence[str],
                          advice: AdviceGroups) -> GuessReport:
        """
        Sequential guessing probability by backward induction over advice prefixes.

        Round j reveals the advice group advice[j]; the guess for targets[j]
        may depend on every advice value revealed so far. The value of a node
        is Σ_y max_x of its children, where a child keeps only the weight
        consistent with every guess made so far being correct.

        Args:
            distribution: Joint table over targets and advice variables
            targets: One target variable per round
            advice: One (possibly empty) group of advice variable names per round

        Returns:
            GuessReport; optimal_strategy maps (round, advice prefix) to a guess,
            the prefix being a tuple with one entry per revealed group

        Raises:
            SizeGuardException: If the prefix tree exceeds the node guard
        """
        advice = [tuple(group) for group in advice]
        tensor = GuessingAnalyzer._round_tensor(distribution, targets, advice)
        GuessingAnalyzer._check_dp_size(tensor)
        rounds = len(targets)
        advice_symbols = [GuessingAnalyzer._advice_symbols(distribution, g) for g in advice]
        target_alphabets = [distribution.alphabet(t) for t in targets]

        def value(node: np.ndarray, j: int, prefix: Tuple[Any, ...]) -> Tuple[float, Dict]:
            if j == rounds:
                return float(np.sum(node)), {}
            total, chosen = 0.0, {}
            for y_index, y_symbol in enumerate(advice_symbols[j]):
                child_prefix = prefix + (GuessingAnalyzer._unwrap(y_symbol) if y_symbol else (),)
                best_value, best_index, best_subtree = -1.0, 0, {}
                for x_index in range(node.shape[1]):
                    candidate, subtree = value(node[y_index, x_index], j + 1, child_prefix)
                    if candidate > best_value:
                        best_value, best_index, best_subtree = candidate, x_index, subtree
                chosen[(j, child_prefix)] = target_alphabets[j][best_index]
                chosen.update(best_subtree)
                total += best_value
            return total, chosen

        p_sequential, strategy = value(tensor, 0, ())
        given = tuple(name for group in advice for name in group)
        return GuessReport.from_probability(p_sequential, strategy, tuple(targets), given)

    @staticmethod
    def replay_sequential_strategy(distribution: JointDistribution, targets: Sequence[str],
                                   advice: AdviceGroups, strategy: Dict[Tuple[int, Tuple[Any, ...]], Any]) -> float:
        """Probability that every guess of a sequential strategy is correct."""
        advice = [tuple(group) for group in advice]
        tensor = GuessingAnalyzer._round_tensor(distribution, targets, advice)
        advice_symbols = [GuessingAnalyzer._advice_symbols(distribution, g) for g in advice]
        target_alphabets = [distribution.alphabet(t) for t in targets]
        success = 0.0
        for y_indices in itertools.product(*[range(len(s)) for s in advice_symbols]):
            prefix: Tuple[Any, ...] = ()
            index: List[int] = []
            for j, y_index in enumerate(y_indices):
                y_symbol = advice_symbols[j][y_index]
                prefix = prefix + (GuessingAnalyzer._unwrap(y_symbol) if y_symbol else (),)
                index.extend([y_index, target_alphabets[j].index(strategy[(j, prefix)])])
            success += float(tensor[tuple(index)])
        return success

    @staticmethod
    def pguess_sequential_exhaustive(distribution: JointDistribution, targets: Sequence[str],
                                     advice: AdviceGroups) -> float:
        """
        Sequential guessing probability by enumerating every tuple of guess functions.

        Raises:
            SizeGuardException: If more than the allowed number of tuples would be enumerated
        """
        advice = [tuple(group) for group in advice]
        tensor = GuessingAnalyzer._round_tensor(distribution, targets, advice)
        advice_sizes = [tensor.shape[j] for j in range(0, tensor.ndim, 2)]
        target_sizes = [tensor.shape[j] for j in range(1, tensor.ndim, 2)]

        # function f_j maps every prefix of advice indices (y_1..y_j) to a guess
        prefixes = [list(itertools.product(*[range(s) for s in advice_sizes[:j + 1]])) for j in range(len(targets))]
        count = 1
        for j, size in enumerate(target_sizes):
            count *= size ** len(prefixes[j])
            if count > Settings.EXHAUSTIVE_MAX_STRATEGIES:
                DebugUtils.error("Exhaustive sequential enumeration refused by size guard")
                raise SizeGuardException(
                    f"Exhaustive enumeration exceeds {Settings.EXHAUSTIVE_MAX_STRATEGIES} strategy tuples"
                )

        function_spaces = [list(itertools.product(range(target_sizes[j]), repeat=len(prefixes[j])))
                           for j in range(len(targets))]
        full_histories = prefixes[-1]
        best = 0.0
        for functions in itertools.product(*function_spaces):
            success = 0.0
            for history in full_histories:
                index: List[int] = []
                for j in range(len(targets)):
                    guess = functions[j][prefixes[j].index(history[:j + 1])]
                    index.extend([history[j], guess])
                success += float(tensor[tuple(index)])
            best = max(best, success)
        return best

    @staticmethod
    def pguess_general(distribution: JointDistribution, targets: Sequence[str], advice: AdviceGroups) -> GuessReport:
        """Guessing all targets jointly with every advice variable available from the start."""
        given = tuple(name for group in advice for name in group)
        return GuessingAnalyzer.pguess_classical(distribution, target=tuple(targets), given=given)

    @staticmethod
    def _event_mask(distribution: JointDistribution, targets: Sequence[str], advice: AdviceGroups,
                    strategy: Dict[Tuple[int, Tuple[Any, ...]], Any], rounds: int) -> np.ndarray:
        """Indicator over the full table of: the first `rounds` guesses of strategy are correct."""
        mask = np.ones(distribution.shape, dtype=bool)
        for full_index in itertools.product(*[range(s) for s in distribution.shape]):
            prefix: Tuple[Any, ...] = ()
            for j in range(rounds):
                group = advice[j]
                if group:
                    y_symbol = tuple(distribution.alphabet(g)[full_index[distribution.axis(g)]] for g in group)
                    prefix = prefix + (GuessingAnalyzer._unwrap(y_symbol),)
                else:
                    prefix = prefix + ((),)
                x_symbol = distribution.alphabet(targets[j])[full_index[distribution.axis(targets[j])]]
                if strategy[(j, prefix)] != x_symbol:
                    mask[full_index] = False
                    break
        return mask

    @staticmethod
    def conditioning_identity_check(distribution: JointDistribution, targets: Sequence[str],
                                    advice: AdviceGroups) -> ConditioningReport:
        """
        Split the sequential guessing probability at the last round.

        With S the event that the optimal strategy guesses the first n-1 targets
        correctly, p_seq(X^n|Y^n) must equal Pr[S] · p_guess(X_n | Y^n, S). The
        right-hand side is computed from the conditioned table, independently of
        the backward induction.
        """
        advice = [tuple(group) for group in advice]
        targets = tuple(targets)
        if len(targets) < 2:
            raise ValidationException("Conditioning split needs at least two rounds")
        full = GuessingAnalyzer.pguess_sequential(distribution, targets, advice)
        prefix = GuessingAnalyzer.pguess_sequential(distribution, targets[:-1], advice[:-1])
        mask = GuessingAnalyzer._event_mask(distribution, targets, advice, full.optimal_strategy, len(targets) - 1)
        weights = np.where(mask, distribution.probabilities, 0.0)
        p_event = float(weights.sum())
        tolerance = Settings.IDENTITY_TOLERANCE
        if p_event <= 0.0:
            return ConditioningReport(p_sequential=full.p_guess, p_prefix=prefix.p_guess, p_event=0.0,
                                      p_last_given_event=0.0, holds=abs(full.p_guess) <= tolerance,
                                      note="event has probability zero")
        conditioned = JointDistribution(distribution.names, distribution.alphabets, weights / p_event)
        given = tuple(name for group in advice for name in group)
        last = GuessingAnalyzer.pguess_classical(conditioned, target=(targets[-1],), given=given)
        holds = abs(full.p_guess - p_event * last.p_guess) <= tolerance
        if not holds:
            DebugUtils.warning(f"Conditioning split failed: {full.p_guess} vs {p_event} * {last.p_guess}")
        return ConditioningReport(p_sequential=full.p_guess, p_prefix=prefix.p_guess, p_event=p_event,
                                  p_last_given_event=last.p_guess, holds=holds)

    @staticmethod
    def born_rule_table(states: Sequence[DensityMatrix], weights: Sequence[float],
                        a0: HermitianOperator, a1: HermitianOperator) -> JointDistribution:
        """
        Table over (x, theta, k) for Alice measuring A_theta on ρ_k, K = k with probability p_k.

        Pr[x, θ, k] = ½ p_k (1 + (-1)^x tr(A_θ ρ_k)) / 2, outcome x = 0 being +1.
        """
        weights = np.asarray(weights, dtype=float)
        if len(states) != len(weights) or len(states) == 0:
            raise DistributionException("Need one weight per state")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > Settings.CONSTRUCTION_TOLERANCE:
            raise DistributionException("State weights must be non-negative and sum to 1")
        table = np.zeros((2, 2, len(states)))
        for k, (rho, p_k) in enumerate(zip(states, weights)):
            for theta, observable in enumerate((a0, a1)):
                mean = MatrixCore.expectation(observable, rho)
                table[0, theta, k] = 0.25 * p_k * (1.0 + mean)
                table[1, theta, k] = 0.25 * p_k * (1.0 - mean)
        return JointDistribution(("x", "theta", "k"), ((0, 1), (0, 1), tuple(range(len(states)))),
                                 np.clip(table, 0.0, None))

    @staticmethod
    def postmeasurement_table(rho_ab: DensityMatrix, dims: Tuple[int, int], a0: HermitianOperator,
                              a1: HermitianOperator, bob_observable: HermitianOperator) -> JointDistribution:
        """
        Table over (x, theta, k) when Bob measures a two-outcome observable M on his half.

        Bob's outcome k has effect N_k = (𝟙 + (-1)^k M)/2; conditional on k Alice
        holds p_k ρ_k = tr_B[(𝟙 ⊗ N_k) ρ_AB].
        """
        d_a, d_b = dims
        if a0.dim != d_a or a1.dim != d_a or bob_observable.dim != d_b or rho_ab.dim != d_a * d_b:
            raise DimensionMismatchException(f"Operators do not fit dims {dims}")
        states, weights = [], []
        for k in (0, 1):
            effect = (np.eye(d_b) + (-1) ** k * bob_observable.entries) / 2
            unnormalised = MatrixCore.partial_trace_array(
                np.kron(np.eye(d_a), effect) @ rho_ab.entries, dims, keep="A"
            )
            unnormalised = (unnormalised + unnormalised.conj().T) / 2
            p_k = max(float(np.real(np.trace(unnormalised))), 0.0)
            weights.append(p_k)
            states.append(DensityMatrix(unnormalised / p_k) if p_k > Settings.CONSTRUCTION_TOLERANCE
                          else DensityMatrix(np.eye(d_a) / d_a))
        weights = np.array(weights) / sum(weights)
        return GuessingAnalyzer.born_rule_table(states, weights, a0, a1)

    @staticmethod
    def sequential_gap_distribution() -> JointDistribution:
        """
        Two-round table where sequential guessing falls strictly below general guessing.

        Over (theta2, x1, x2): guessing (x1, x2) from theta2 succeeds with 1/2,
        while guessing x1 before seeing theta2 and x2 after succeeds with 3/8.
        """
        rows = {
            (0, 0, 0): "1/4", (0, 1, 0): "1/8", (0, 1, 1): "1/8",
            (1, 0, 0): "1/8", (1, 0, 1): "1/8", (1, 1, 1): "1/4",
        }
        return JointDistribution.from_mapping(("theta2", "x1", "x2"), ((0, 1), (0, 1), (0, 1)), rows)

    @staticmethod
    def side_information_example() -> Dict[str, Any]:
        """
        Ququart example where the signed effective anticommutator vanishes
        but a classical register K still reveals X perfectly.

        Returns:
            dict with rho_ak, a0, a1, eps_eff, eps_plus and the (x, theta, k) table
        """
        a0 = HermitianOperator(np.diag([1.0, -1.0, 1.0, -1.0]))
        a1 = HermitianOperator(np.diag([1.0, -1.0, -1.0, 1.0]))
        basis = np.eye(4)
        register = np.eye(2)
        rho_ak = 0.5 * (np.kron(np.outer(basis[0], basis[0]), np.outer(register[0], register[0]))
                        + np.kron(np.outer(basis[2], basis[2]), np.outer(register[1], register[1])))
        rho_ak = DensityMatrix(rho_ak)
        rho_a = MatrixCore.partial_trace(rho_ak, (4, 2), keep="A")
        anticommutator = MatrixCore.anticommutator(a0, a1)
        eps_eff = 0.5 * MatrixCore.expectation(anticommutator, rho_a)
        eps_plus = ChshAnalyzer.absolute_effective_anticommutator(a0, a1, rho_a)
        table = GuessingAnalyzer.postmeasurement_table(rho_ak, (4, 2), a0, a1, HermitianOperator(SIGMA_Z))
        return {
            "rho_ak": rho_ak,
            "a0": a0,
            "a1": a1,
            "eps_eff": eps_eff,
            "eps_plus": eps_plus,
            "table": table
        }

    @staticmethod
    def product_distribution(first: JointDistribution, second: JointDistribution) -> JointDistribution:
        """Independent joint of two tables with disjoint variable names."""
        if set(first.names) & set(second.names):
            raise DistributionException("Product needs disjoint variable names")
        return JointDistribution(first.names + second.names, first.alphabets + second.alphabets,
                                 np.multiply.outer(first.probabilities, second.probabilities))

    @staticmethod
    def random_distribution(rng: np.random.Generator, names: Sequence[str], sizes: Sequence[int],
                            dyadic_bits: int = 0) -> JointDistribution:
        """
        Random table from a seeded generator.

        With dyadic_bits > 0 the entries are multiples of 2^-dyadic_bits, so
        sums and products stay exact in floating point.
        """
        sizes = [BaseAnalyzer._validate_positive_int("size", s) for s in sizes]
        cells = int(np.prod(sizes))
        if dyadic_bits > 0:
            total = 2 ** dyadic_bits
            if total < cells:
                raise ValidationException(f"2^{dyadic_bits} units cannot cover {cells} cells")
            counts = np.bincount(rng.integers(0, cells, size=total), minlength=cells)
            table = counts / total
        else:
            raw = rng.random(cells)
            table = raw / raw.sum()
        return JointDistribution(tuple(names), tuple(tuple(range(s)) for s in sizes), table.reshape(sizes))

    @staticmethod
    def random_classical_adversary_table(rng: np.random.Generator) -> Tuple[JointDistribution, float]:
        """
        Random qubit construction: two-qubit state mixed from pure states, Alice's
        projective observables, Bob's projective observable; returns the
        (x, theta, k) table and Alice's absolute effective anticommutator.
        """
        weight = rng.uniform(0.0, 1.0)
        pure = [MatrixCore.random_density_matrix(rng, 4, rank=1).entries for _ in range(2)]
        rho = weight * pure[0] + (1.0 - weight) * pure[1]
        rho = DensityMatrix((rho + rho.conj().T) / 2)
        a0 = ChshAnalyzer.bloch_observable(ChshAnalyzer.random_bloch_vector(rng))
        a1 = ChshAnalyzer.bloch_observable(ChshAnalyzer.random_bloch_vector(rng))
        bob = ChshAnalyzer.bloch_observable(ChshAnalyzer.random_bloch_vector(rng))
        rho_a = MatrixCore.partial_trace(rho, (2, 2), keep="A")
        eps_plus = ChshAnalyzer.absolute_effective_anticommutator(a0, a1, rho_a)
        return GuessingAnalyzer.postmeasurement_table(rho, (2, 2), a0, a1, bob), eps_plus

    @staticmethod
    def exact_probability(value: float, max_denominator: int = 1 << 20) -> Fraction:
        """Closest fraction with a bounded denominator; exact for dyadic fixtures."""
        return Fraction(value).limit_denominator(max_denominator)
