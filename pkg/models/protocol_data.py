import json
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from exceptions.wse_exceptions import ValidationException

@dataclass(frozen=True)
class RoundRecord:
    """Random variables of one protocol round.

    q = 1 marks a test round (t, y set); q = 0 a live round (k, guess set).
    Bits are 0/1; outcome 0 stands for the +1 eigenvalue.
    """
    index: int
    q: int
    theta: int
    x: int
    t: Optional[int] = None
    y: Optional[int] = None
    k: Optional[int] = None
    guess: Optional[int] = None

    def __post_init__(self):
        for name in ("q", "theta", "x"):
            if getattr(self, name) not in (0, 1):
                raise ValidationException(f"Round field {name} must be a bit, got {getattr(self, name)!r}")
        test_fields = (self.t, self.y)
        live_fields = (self.k, self.guess)
        if self.q == 1 and (None in test_fields or any(v is not None for v in live_fields)):
            raise ValidationException(f"Test round {self.index} must carry exactly t and y")
        if self.q == 0 and (None in live_fields or any(v is not None for v in test_fields)):
            raise ValidationException(f"Live round {self.index} must carry exactly k and guess")

    @property
    def is_test(self) -> bool:
        return self.q == 1

    @property
    def win(self) -> Optional[bool]:
        """CHSH condition x ⊕ y = θ·t on test rounds."""
        if not self.is_test:
            return None
        return (self.x ^ self.y) == (self.theta & self.t)

    @property
    def correct(self) -> Optional[bool]:
        if self.is_test:
            return None
        return self.guess == self.x

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

@dataclass(frozen=True)
class Transcript:
    """All rounds of one sequential-attack run with the derived counters."""
    rounds: Tuple[RoundRecord, ...]
    gamma: Fraction
    r_n: int
    s_n: int
    passed: bool
    h_n: bool
    failed: bool
    vacuous_pass: bool = False

    @property
    def f_chsh(self) -> Optional[Fraction]:
        """Empirical winning fraction s_n / r_n; None without test rounds."""
        return Fraction(self.s_n, self.r_n) if self.r_n > 0 else None

    def counters_consistent(self) -> bool:
        """Recompute every counter from the rounds and compare."""
        r_n = sum(r.q for r in self.rounds)
        s_n = sum(1 for r in self.rounds if r.is_test and r.win)
        h_n = all(r.correct for r in self.rounds if not r.is_test)
        passed = self.s_n * self.gamma.denominator >= self.gamma.numerator * self.r_n
        return (r_n == self.r_n and s_n == self.s_n and h_n == self.h_n and passed == self.passed
                and self.failed == (self.passed and self.h_n) and self.vacuous_pass == (r_n == 0))

    def footer(self) -> Dict[str, Any]:
        return {
            "footer": True,
            "rounds": len(self.rounds),
            "gamma": str(self.gamma),
            "r_n": self.r_n,
            "s_n": self.s_n,
            "f_chsh": None if self.f_chsh is None else str(self.f_chsh),
            "passed": self.passed,
            "h_n": self.h_n,
            "failed": self.failed,
            "vacuous_pass": self.vacuous_pass
        }

    def to_jsonl(self) -> str:
        """One JSON object per round followed by the counter footer, LF-terminated."""
        lines = [json.dumps(r.to_dict(), sort_keys=True) for r in self.rounds]
        lines.append(json.dumps(self.footer(), sort_keys=True))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "Transcript":
        records = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not records or not records[-1].get("footer"):
            raise ValidationException("Transcript is missing its footer record")
        footer = records.pop()
        return cls(
            rounds=tuple(RoundRecord(**r) for r in records),
            gamma=Fraction(footer["gamma"]),
            r_n=footer["r_n"],
            s_n=footer["s_n"],
            passed=footer["passed"],
            h_n=footer["h_n"],
            failed=footer["failed"],
            vacuous_pass=footer["vacuous_pass"]
        )

@dataclass(frozen=True)
class HonestRun:
    """Outcome of an honest protocol execution with ideal devices."""
    x: Tuple[int, ...]
    theta: Tuple[int, ...]
    theta_prime: Tuple[int, ...]
    bob_bits: Tuple[int, ...]
    index_set: Tuple[int, ...]
    phases: Tuple[str, ...] = ()

    @property
    def x_index(self) -> Tuple[int, ...]:
        """Alice's bits on the index set."""
        return tuple(self.x[j] for j in self.index_set)

    @property
    def bob_index(self) -> Tuple[int, ...]:
        return tuple(self.bob_bits[j] for j in self.index_set)

    def agreement_on_index_set(self) -> bool:
        return self.x_index == self.bob_index

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["x_index"] = list(self.x_index)
        return data

@dataclass(frozen=True)
class MonteCarloReport:
    """Failure statistics of repeated sequential-attack runs against the decay bound."""
    params: Dict[str, Any]
    strategy: str
    admissible: Optional[bool]
    trials: int
    seed: int
    failures: int
    passes: int
    passes_with_all_guesses: int
    vacuous_passes: int
    p_hat: float
    ci_low: float
    ci_high: float
    confidence: float
    bound: float
    p_pass_hat: float
    conditional_rate: Optional[float]
    factorization_exact: bool
    bound_violated: bool
    live_rounds: int = 0
    live_correct: int = 0
    test_rounds: int = 0
    test_wins: int = 0

    @property
    def live_correct_rate(self) -> Optional[float]:
        return self.live_correct / self.live_rounds if self.live_rounds else None

    @property
    def test_win_rate(self) -> Optional[float]:
        return self.test_wins / self.test_rounds if self.test_rounds else None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["ci"] = [self.ci_low, self.ci_high]
        data["live_correct_rate"] = self.live_correct_rate
        data["test_win_rate"] = self.test_win_rate
        return data

@dataclass(frozen=True)
class AuditRow:
    """One (l, x) comparison of the audit."""
    kind: str
    l: int
    x: float
    empirical: float
    predicted: float
    sigma: float
    within: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

@dataclass(frozen=True)
class RecursionAuditReport:
    """Empirical check of the one-round transition identity and the exponential tail bound."""
    params: Dict[str, Any]
    strategy: str
    trials: int
    seed: int
    k_star: float
    alpha: float
    transition_rows: List[AuditRow] = field(default_factory=list)
    ansatz_rows: List[AuditRow] = field(default_factory=list)
    min_within_fraction: float = 0.95

    @property
    def transition_within_fraction(self) -> float:
        if not self.transition_rows:
            return 1.0
        return sum(r.within for r in self.transition_rows) / len(self.transition_rows)

    @property
    def ansatz_holds(self) -> bool:
        return all(r.within for r in self.ansatz_rows)

    @property
    def passed(self) -> bool:
        return self.transition_within_fraction >= self.min_within_fraction and self.ansatz_holds

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params,
            "strategy": self.strategy,
            "trials": self.trials,
            "seed": self.seed,
            "k_star": self.k_star,
            "alpha": self.alpha,
            "transition_within_fraction": self.transition_within_fraction,
            "ansatz_holds": self.ansatz_holds,
            "passed": self.passed,
            "transition_rows": [r.to_dict() for r in self.transition_rows],
            "ansatz_rows": [r.to_dict() for r in self.ansatz_rows]
        }

@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named verification check."""
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

@dataclass(frozen=True)
class VerificationReport:
    scale: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scale": self.scale,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks]
        }
