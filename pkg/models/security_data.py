from abc import ABC, abstractmethod
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Any, Dict, Sequence, Tuple

from exceptions.wse_exceptions import ValidationException
from constants.Constants import GAMMA_MIN, GAMMA_MAX

@dataclass(frozen=True)
class TradeoffPoint:
    """Admissible (p_L, p_T) pair for absolute effective anticommutator t."""
    t: float
    p_L: float
    p_T: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)

class StorageModel(ABC):
    """Adversary storage: maps a number of transmitted bits k to the success probability P_succ(k)."""

    @property
    @abstractmethod
    def kind(self) -> str:
        """Name of the storage model."""
        pass

    @abstractmethod
    def success_probability(self, k: int) -> float:
        """P_succ(k) for k >= 0 classical bits sent through the storage."""
        pass

    def _check_bits(self, k: int) -> int:
        if int(k) != k or k < 0:
            raise ValidationException(f"Bit count must be a non-negative integer, got {k!r}")
        return int(k)

class BoundedStorage(StorageModel):
    """Quantum memory of dimension d: P_succ(k) = min(1, d / 2^k)."""

    def __init__(self, d: int):
        if isinstance(d, bool) or int(d) != d or d < 1:
            raise ValidationException(f"Storage dimension must be an integer >= 1, got {d!r}")
        self.d = int(d)

    @property
    def kind(self) -> str:
        return "bounded"

    def success_probability(self, k: int) -> float:
        k = self._check_bits(k)
        return float(min(Fraction(1), Fraction(self.d, 2 ** k)))

    def __repr__(self) -> str:
        return f"BoundedStorage(d={self.d})"

class TabulatedStorage(StorageModel):
    """Noisy channel given by a table of P_succ(0), P_succ(1), ...; the last entry extends to larger k."""

    def __init__(self, values: Sequence[float]):
        values = tuple(float(v) for v in values)
        if not values:
            raise ValidationException("Success-probability table must not be empty")
        if abs(values[0] - 1.0) > 1e-12:
            raise ValidationException(f"P_succ(0) must equal 1, got {values[0]}")
        if any(v <= 0.0 or v > 1.0 for v in values):
            raise ValidationException("Success probabilities must lie in (0, 1]")
        if any(later > earlier for earlier, later in zip(values, values[1:])):
            raise ValidationException("Success probabilities must be non-increasing in k")
        self.values = values

    @property
    def kind(self) -> str:
        return "noisy"

    def success_probability(self, k: int) -> float:
        k = self._check_bits(k)
        return self.values[min(k, len(self.values) - 1)]

    def __repr__(self) -> str:
        return f"TabulatedStorage(values={list(self.values)})"

def exact_gamma(value: Any) -> Fraction:
    """Threshold as an exact rational; floats are read as the decimal they print as."""
    if isinstance(value, Fraction):
        return value
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ValidationException(f"gamma must be a decimal or rational number, got {value!r}")

@dataclass(frozen=True)
class TestParams:
    """Sequential-test parameters: test probability q, CHSH threshold gamma and round count n.

    gamma is kept twice: as the exact rational the caller supplied (used by
    the pass/fail test) and as a float for the bound formulas.
    """
    __test__ = False

    q: float
    gamma: float
    n: int = 1
    gamma_exact: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        q, exact = float(self.q), exact_gamma(self.gamma)
        if not 0.0 <= q <= 1.0:
            raise ValidationException(f"q must lie in [0, 1], got {self.q}")
        if not GAMMA_MIN <= exact <= GAMMA_MAX:
            raise ValidationException(f"gamma must lie in [{GAMMA_MIN}, {GAMMA_MAX}], got {self.gamma}")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 0:
            raise ValidationException(f"n must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "gamma", float(exact))
        object.__setattr__(self, "gamma_exact", exact)
        object.__setattr__(self, "n", int(self.n))

    @property
    def gamma_fraction(self) -> Fraction:
        return self.gamma_exact

    def to_dict(self) -> Dict[str, Any]:
        return {"q": self.q, "gamma": self.gamma, "n": self.n}

@dataclass(frozen=True)
class AlphaResult:
    """Minimum over k of the one-round decay factor alpha(q, gamma, k)."""
    q: float
    gamma: float
    alpha_min: float
    k_star: float
    t_star: float
    converged: bool = True
    degenerate: bool = False
    evaluations: int = 0
    bracket: Tuple[float, float] = field(default=(0.0, 0.0))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["bracket"] = list(self.bracket)
        return data
