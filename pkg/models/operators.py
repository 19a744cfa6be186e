from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from config.settings import Settings
from exceptions.wse_exceptions import (
    ValidationException,
    HermiticityException,
    StateException
)

@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """Dense square complex matrix; entries are copied and frozen."""
    entries: np.ndarray

    def __post_init__(self):
        array = np.array(self.entries, dtype=complex, copy=True)
        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
            raise ValidationException(f"Matrix must be square and non-empty, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise ValidationException("Matrix entries must be finite")
        array.setflags(write=False)
        object.__setattr__(self, "entries", array)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> np.ndarray:
        return self.entries.conj().T

    def to_dict(self) -> Dict[str, Any]:
        """Row-major entries as [re, im] pairs."""
        return {
            "dim": self.dim,
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in self.entries]
        }

    @staticmethod
    def entries_from_pairs(rows: List[List[List[float]]]) -> np.ndarray:
        return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)

@dataclass(frozen=True, eq=False)
class HermitianOperator(ComplexMatrix):
    """Hermitian operator, M = M† within the construction tolerance."""

    def __post_init__(self):
        super().__post_init__()
        deviation = float(np.max(np.abs(self.entries - self.dagger())))
        if deviation > Settings.CONSTRUCTION_TOLERANCE:
            raise HermiticityException(f"Operator is not Hermitian (max deviation {deviation:.3e})")

@dataclass(frozen=True, eq=False)
class DensityMatrix(HermitianOperator):
    """Positive-semidefinite unit-trace Hermitian operator."""

    def __post_init__(self):
        super().__post_init__()
        tol = Settings.CONSTRUCTION_TOLERANCE
        trace = complex(np.trace(self.entries))
        if abs(trace - 1.0) > tol:
            raise StateException(f"State must have unit trace, got {trace.real:.15g}")
        smallest = float(np.linalg.eigvalsh(self.entries)[0])
        if smallest < -tol:
            raise StateException(f"State must be positive semidefinite, smallest eigenvalue {smallest:.3e}")

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> "DensityMatrix":
        """Pure state |v><v| for a (normalised on the fly) vector."""
        v = np.asarray(vector, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))
