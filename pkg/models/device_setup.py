from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from config.settings import Settings
from exceptions.wse_exceptions import DimensionMismatchException, ValidationException
from models.operators import ComplexMatrix, HermitianOperator, DensityMatrix

def _check_observable(name: str, observable: HermitianOperator) -> None:
    spectrum = np.linalg.eigvalsh(observable.entries)
    limit = 1.0 + Settings.CONSTRUCTION_TOLERANCE
    if spectrum[0] < -limit or spectrum[-1] > limit:
        raise ValidationException(
            f"Observable {name} must have spectrum in [-1, 1], got [{spectrum[0]:.15g}, {spectrum[-1]:.15g}]"
        )

@dataclass(frozen=True, eq=False)
class DeviceSetup:
    """Bipartite state plus two binary observables on each side."""
    rho_ab: DensityMatrix
    a0: HermitianOperator
    a1: HermitianOperator
    b0: HermitianOperator
    b1: HermitianOperator

    def __post_init__(self):
        if self.a0.dim != self.a1.dim or self.b0.dim != self.b1.dim:
            raise DimensionMismatchException("Both observables on one side must share a dimension")
        if self.rho_ab.dim != self.a0.dim * self.b0.dim:
            raise DimensionMismatchException(
                f"State dimension {self.rho_ab.dim} does not equal {self.a0.dim} x {self.b0.dim}"
            )
        for name in ("a0", "a1", "b0", "b1"):
            _check_observable(name, getattr(self, name))

    @property
    def dims(self) -> Tuple[int, int]:
        return self.a0.dim, self.b0.dim

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready document: dims plus row-major [re, im] entries."""
        return {
            "dims": list(self.dims),
            "rho_ab": self.rho_ab.to_dict()["entries"],
            "a0": self.a0.to_dict()["entries"],
            "a1": self.a1.to_dict()["entries"],
            "b0": self.b0.to_dict()["entries"],
            "b1": self.b1.to_dict()["entries"]
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DeviceSetup":
        missing = [key for key in ("dims", "rho_ab", "a0", "a1", "b0", "b1") if key not in data]
        if missing:
            raise ValidationException(f"Setup document is missing: {', '.join(missing)}")
        setup = cls(
            rho_ab=DensityMatrix(ComplexMatrix.entries_from_pairs(data["rho_ab"])),
            a0=HermitianOperator(ComplexMatrix.entries_from_pairs(data["a0"])),
            a1=HermitianOperator(ComplexMatrix.entries_from_pairs(data["a1"])),
            b0=HermitianOperator(ComplexMatrix.entries_from_pairs(data["b0"])),
            b1=HermitianOperator(ComplexMatrix.entries_from_pairs(data["b1"]))
        )
        if list(setup.dims) != list(data["dims"]):
            raise DimensionMismatchException(f"Declared dims {data['dims']} disagree with {setup.dims}")
        return setup

@dataclass(frozen=True)
class ChshReport:
    """CHSH value against the absolute effective anticommutator bound."""
    beta: float
    eps_plus: float
    bound_rhs: float
    slack: float
    saturated: bool

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)

@dataclass(frozen=True)
class ChshBoundChain:
    """Intermediate quantities of the CHSH/anticommutator argument, in chain order.

    beta_squared <= w_squared <= commutator_term <= commutator_square_term
        <= anticommutator_term <= eps_term
    """
    beta_squared: float
    w_squared: float
    commutator_term: float
    commutator_square_term: float
    anticommutator_term: float
    eps_term: float

    def as_list(self):
        return [self.beta_squared, self.w_squared, self.commutator_term,
                self.commutator_square_term, self.anticommutator_term, self.eps_term]

    def is_monotone(self, tolerance: float = Settings.BOUND_SLACK_TOLERANCE) -> bool:
        chain = self.as_list()
        return all(chain[i] <= chain[i + 1] + tolerance for i in range(len(chain) - 1))
