import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from constants.Constants import (
    CLASSICAL_WIN_PROBABILITY, STRATEGY_CLASSICAL, STRATEGY_CURVE, STRATEGY_PERFECT, STRATEGY_LAW,
    STRATEGY_QUANTUM_BISECTOR
)
from exceptions.wse_exceptions import StrategyContractException, ValidationException
from models.device_setup import DeviceSetup
from models.operators import HermitianOperator
from services.analysis.alpha_analyzer import AlphaAnalyzer
from services.analysis.bounds_analyzer import BoundsAnalyzer
from services.analysis.chsh_analyzer import ChshAnalyzer
from utils.debug_utils import DebugUtils

@dataclass(frozen=True)
class RoundLaw:
    """Probabilistic round model: live guess correct with p_live_correct, test won with p_test_win."""
    p_live_correct: float
    p_test_win: float

    def __post_init__(self):
        for name in ("p_live_correct", "p_test_win"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or math.isnan(value) or not 0.0 <= value <= 1.0:
                raise StrategyContractException(f"{name} must be a probability, got {value!r}")

@dataclass(frozen=True, eq=False)
class QuantumRoundModel:
    """Quantum round model: devices, Bob's live-round observable and his guess table (k, theta) -> guess.

    test_table[theta, t, x, y] and live_table[theta, x, k] hold the Born-rule
    probabilities, outcome 0 standing for eigenvalue +1.
    """
    setup: DeviceSetup
    live_observable: HermitianOperator
    guess_table: Dict[Tuple[int, int], int]
    test_table: np.ndarray = field(init=False, repr=False)
    live_table: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.live_observable.dim != self.setup.dims[1]:
            raise StrategyContractException("Live-round observable must act on Bob's system")
        for key in ((k, theta) for k in (0, 1) for theta in (0, 1)):
            if self.guess_table.get(key) not in (0, 1):
                raise StrategyContractException(f"Guess table needs a bit for (k, theta) = {key}")
        rho = self.setup.rho_ab.entries
        alice = [self._effects(self.setup.a0), self._effects(self.setup.a1)]
        bob = [self._effects(self.setup.b0), self._effects(self.setup.b1)]
        live = self._effects(self.live_observable)

        test_table = np.zeros((2, 2, 2, 2))
        live_table = np.zeros((2, 2, 2))
        for theta in (0, 1):
            for x in (0, 1):
                for t in (0, 1):
                    for y in (0, 1):
                        test_table[theta, t, x, y] = np.real(np.trace(np.kron(alice[theta][x], bob[t][y]) @ rho))
                for k in (0, 1):
                    live_table[theta, x, k] = np.real(np.trace(np.kron(alice[theta][x], live[k]) @ rho))
        test_table = np.clip(test_table, 0.0, None)
        live_table = np.clip(live_table, 0.0, None)
        test_table.setflags(write=False)
        live_table.setflags(write=False)
        object.__setattr__(self, "test_table", test_table)
        object.__setattr__(self, "live_table", live_table)

    @staticmethod
    def _effects(observable: HermitianOperator):
        identity = np.eye(observable.dim)
        return [(identity + observable.entries) / 2, (identity - observable.entries) / 2]

    def test_win_probability(self) -> float:
        """Average over uniform (theta, t) of Pr[x ⊕ y = theta·t]."""
        total = 0.0
        for theta in (0, 1):
            for t in (0, 1):
                for x in (0, 1):
                    total += self.test_table[theta, t, x, x ^ (theta & t)]
        return total / 4.0

    def live_correct_probability(self) -> float:
        total = 0.0
        for theta in (0, 1):
            for x in (0, 1):
                for k in (0, 1):
                    if self.guess_table[(k, theta)] == x:
                        total += self.live_table[theta, x, k]
        return total / 2.0

RoundModel = Union[RoundLaw, QuantumRoundModel]

class AttackStrategy(ABC):
    """Sequential attack: a round model per round, chosen from the round index and an opaque memory."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Registry name of the strategy."""
        pass

    @property
    def admissible(self) -> Optional[bool]:
        """Whether every round law lies on or below the trade-off curve; None when not claimed."""
        return None

    def initial_memory(self) -> Any:
        return None

    @abstractmethod
    def round_model(self, round_index: int, memory: Any) -> Tuple[RoundModel, Any]:
        """Round model for round_index plus the updated memory."""
        pass

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "admissible": self.admissible}

class FixedLawStrategy(AttackStrategy):
    """Memoryless strategy playing the same (p_L, p_T) pair every round."""

    def __init__(self, p_live_correct: float, p_test_win: float, name: str = STRATEGY_LAW):
        self.law = RoundLaw(float(p_live_correct), float(p_test_win))
        self._name = name
        self._admissible = BoundsAnalyzer.is_admissible(self.law.p_live_correct, self.law.p_test_win)
        if not self._admissible:
            DebugUtils.warning(
                f"Strategy '{name}' plays an inadmissible pair "
                f"(p_L={self.law.p_live_correct:.6g}, p_T={self.law.p_test_win:.6g})"
            )

    @property
    def name(self) -> str:
        return self._name

    @property
    def admissible(self) -> Optional[bool]:
        return self._admissible

    def round_model(self, round_index: int, memory: Any) -> Tuple[RoundModel, Any]:
        return self.law, memory

    def describe(self) -> Dict[str, Any]:
        data = super().describe()
        data.update(p_live_correct=self.law.p_live_correct, p_test_win=self.law.p_test_win)
        return data

class ClassicalStrategy(FixedLawStrategy):
    """Classical endpoint of the trade-off curve: p_L = 1, p_T = 3/4."""

    def __init__(self):
        super().__init__(1.0, CLASSICAL_WIN_PROBABILITY, name=STRATEGY_CLASSICAL)

class PerfectStrategy(FixedLawStrategy):
    """p_L = p_T = 1; not achievable by any device, used to exercise the degenerate limit."""

    def __init__(self):
        super().__init__(1.0, 1.0, name=STRATEGY_PERFECT)

class CurveStrategy(FixedLawStrategy):
    """Point of the trade-off curve at parameter t; defaults to the optimal t for (q, gamma)."""

    def __init__(self, t: Optional[float] = None, q: Optional[float] = None, gamma: Optional[float] = None):
        if t is None:
            if q is None or gamma is None:
                raise ValidationException("Curve strategy needs t or both q and gamma")
            t = AlphaAnalyzer.alpha_min(q, gamma).t_star
        point = BoundsAnalyzer.tradeoff_point(t)
        self.t = point.t
        super().__init__(point.p_L, point.p_T, name=STRATEGY_CURVE)

    def describe(self) -> Dict[str, Any]:
        data = super().describe()
        data["t"] = self.t
        return data

class QuantumBisectorStrategy(AttackStrategy):
    """
    Saturating qubit devices at angle theta; in live rounds Bob measures along the
    bisector of Alice's two Bloch vectors and guesses his outcome.
    """

    def __init__(self, angle: float = math.pi / 2):
        self.angle = float(angle)
        setup = ChshAnalyzer.saturating_setup(self.angle)
        self.model = QuantumRoundModel(
            setup=setup,
            live_observable=setup.b0,
            guess_table={(k, theta): k for k in (0, 1) for theta in (0, 1)}
        )

    @property
    def name(self) -> str:
        return STRATEGY_QUANTUM_BISECTOR

    @property
    def admissible(self) -> Optional[bool]:
        return True

    def round_model(self, round_index: int, memory: Any) -> Tuple[RoundModel, Any]:
        return self.model, memory

    def describe(self) -> Dict[str, Any]:
        data = super().describe()
        data.update(angle=self.angle,
                    p_live_correct=self.model.live_correct_probability(),
                    p_test_win=self.model.test_win_probability())
        return data
