from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import math

import numpy as np

from config.settings import Settings
from exceptions.wse_exceptions import DistributionException

def parse_probability(value: Any) -> float:
    """Probability from a number or an exact string such as "1/8" or "0.125"."""
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            raise DistributionException(f"Cannot parse probability {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise DistributionException(f"Cannot parse probability {value!r}")

@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint probability table of named discrete random variables.

    probabilities has one axis per variable, in the order of names; axis i is
    indexed by the position of a symbol in alphabets[i].
    """
    names: Tuple[str, ...]
    alphabets: Tuple[Tuple[Any, ...], ...]
    probabilities: np.ndarray

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        alphabets = tuple(tuple(a) for a in self.alphabets)
        if len(names) != len(alphabets):
            raise DistributionException("Every variable needs exactly one alphabet")
        if len(set(names)) != len(names):
            raise DistributionException(f"Variable names must be unique, got {names}")
        if any(len(a) == 0 for a in alphabets):
            raise DistributionException("Alphabets must not be empty")
        if any(len(set(a)) != len(a) for a in alphabets):
            raise DistributionException("Alphabet symbols must be distinct")
        shape = tuple(len(a) for a in alphabets)
        table = np.array(self.probabilities, dtype=float, copy=True)
        if table.size != int(np.prod(shape)):
            raise DistributionException(f"Table has {table.size} entries, alphabets need {int(np.prod(shape))}")
        table = table.reshape(shape)
        if not np.all(np.isfinite(table)) or np.any(table < 0):
            raise DistributionException("Probabilities must be finite and non-negative")
        total = float(table.sum())
        if abs(total - 1.0) > Settings.CONSTRUCTION_TOLERANCE:
            raise DistributionException(f"Probabilities must sum to 1, got {total:.15g}")
        table.setflags(write=False)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "alphabets", alphabets)
        object.__setattr__(self, "probabilities", table)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.probabilities.shape

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DistributionException(f"Unknown variable {name!r}; known: {', '.join(self.names)}")

    def alphabet(self, name: str) -> Tuple[Any, ...]:
        return self.alphabets[self.axis(name)]

    def marginal(self, names: Sequence[str]) -> "JointDistribution":
        """Marginal over the given variables, in the given order."""
        names = tuple(names)
        if len(set(names)) != len(names):
            raise DistributionException(f"Repeated variable in {names}")
        axes = [self.axis(n) for n in names]
        dropped = tuple(i for i in range(len(self.names)) if i not in axes)
        table = self.probabilities.sum(axis=dropped) if dropped else self.probabilities
        # remaining axes keep their relative order; permute to the requested one
        kept = [i for i in range(len(self.names)) if i in axes]
        table = np.transpose(table, [kept.index(i) for i in axes])
        return JointDistribution(names, [self.alphabets[i] for i in axes], table)

    def probability(self, assignment: Mapping[str, Any]) -> float:
        """Probability of a full or partial assignment {name: symbol}."""
        index = []
        for axis, name in enumerate(self.names):
            if name in assignment:
                try:
                    index.append(self.alphabets[axis].index(assignment[name]))
                except ValueError:
                    raise DistributionException(f"Symbol {assignment[name]!r} not in alphabet of {name}")
            else:
                index.append(slice(None))
        return float(np.sum(self.probabilities[tuple(index)]))

    @classmethod
    def from_mapping(cls, names: Sequence[str], alphabets: Sequence[Sequence[Any]],
                     rows: Mapping[Tuple[Any, ...], Any]) -> "JointDistribution":
        """Build a table from {symbol tuple: probability}; missing rows are zero."""
        alphabets = [tuple(a) for a in alphabets]
        table = np.zeros(tuple(len(a) for a in alphabets))
        for key, value in rows.items():
            if len(key) != len(alphabets):
                raise DistributionException(f"Row {key} does not match variables {tuple(names)}")
            try:
                index = tuple(alphabet.index(symbol) for alphabet, symbol in zip(alphabets, key))
            except ValueError:
                raise DistributionException(f"Row {key} uses a symbol outside the alphabets")
            table[index] += parse_probability(value)
        return cls(tuple(names), tuple(alphabets), table)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready document with a row-major flat probability list."""
        return {
            "names": list(self.names),
            "alphabets": [list(a) for a in self.alphabets],
            "probabilities": [float(p) for p in self.probabilities.ravel()]
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "JointDistribution":
        missing = [key for key in ("names", "alphabets", "probabilities") if key not in data]
        if missing:
            raise DistributionException(f"Distribution document is missing: {', '.join(missing)}")
        values = [parse_probability(p) for p in data["probabilities"]]
        return cls(tuple(data["names"]), tuple(tuple(a) for a in data["alphabets"]), np.array(values))

@dataclass(frozen=True)
class GuessReport:
    """Optimal guessing probability with the strategy achieving it."""
    p_guess: float
    h_min: float
    optimal_strategy: Dict[Any, Any] = field(default_factory=dict)
    target: Tuple[str, ...] = ()
    given: Tuple[str, ...] = ()

    @classmethod
    def from_probability(cls, p_guess: float, strategy: Dict[Any, Any],
                         target: Sequence[str], given: Sequence[str]) -> "GuessReport":
        h_min = max(0.0, -math.log2(p_guess)) if p_guess > 0 else math.inf
        return cls(p_guess=float(p_guess), h_min=h_min, optimal_strategy=dict(strategy),
                   target=tuple(target), given=tuple(given))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p_guess": self.p_guess,
            "h_min": self.h_min,
            "target": list(self.target),
            "given": list(self.given),
            "optimal_strategy": [{"given": list(k) if isinstance(k, tuple) else k,
                                  "guess": list(v) if isinstance(v, tuple) else v}
                                 for k, v in self.optimal_strategy.items()]
        }

@dataclass(frozen=True)
class ConditioningReport:
    """Sequential guessing probability split at the last round."""
    p_sequential: float
    p_prefix: float
    p_event: float
    p_last_given_event: float
    holds: bool
    tolerance: float = Settings.IDENTITY_TOLERANCE
    note: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)
