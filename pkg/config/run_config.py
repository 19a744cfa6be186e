from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

from dotenv import dotenv_values

from config.settings import Settings
from constants.Constants import (
    CHSH_CLASSICAL_MAX, CHSH_QUANTUM_MAX, GAMMA_MIN, GAMMA_MAX,
    CMD_BOUNDS, CMD_TRADEOFF, CMD_ALPHA_MIN, CMD_SIMULATE, CMD_VERIFY, COMMANDS, OUTPUT_FORMATS,
    STRATEGY_CLASSICAL, STRATEGY_CURVE, STRATEGY_LAW, STRATEGY_QUANTUM_BISECTOR, VERIFY_SCALES
)
from exceptions.wse_exceptions import ValidationException
from models.security_data import TestParams, exact_gamma

SEED_LIMIT = 1 << 64

def _parse_int(raw: str) -> int:
    return int(str(raw).strip())

def _parse_float(raw: str) -> float:
    return float(str(raw).strip())

def _parse_rational(raw: str) -> float:
    """Decimal or p/q string; 17/20 and 0.85 give the same float."""
    return float(Fraction(str(raw).strip()))

def _parse_grid(raw: str) -> Tuple[float, ...]:
    return tuple(_parse_rational(v) for v in str(raw).split(",") if v.strip())

def _parse_text(raw: str) -> str:
    return str(raw).strip()

# key in the config file -> (field, parser)
_KEYS: Dict[str, Tuple[str, Callable[[str], Any]]] = {
    "seed": ("seed", _parse_int),
    "format": ("output_format", _parse_text),
    "out": ("out", _parse_text),
    "transcript": ("transcript", _parse_text),
    "beta_min": ("beta_min", _parse_float),
    "beta_max": ("beta_max", _parse_float),
    "samples": ("samples", _parse_int),
    "q_grid": ("q_grid", _parse_grid),
    "gamma_grid": ("gamma_grid", _parse_grid),
    "q": ("q", _parse_rational),
    "gamma": ("gamma", exact_gamma),
    "n": ("n", _parse_int),
    "strategy": ("strategy", _parse_text),
    "t": ("t", _parse_float),
    "p_live": ("p_live", _parse_rational),
    "p_test": ("p_test", _parse_rational),
    "angle": ("angle", _parse_float),
    "trials": ("trials", _parse_int),
    "verify_scale": ("verify_scale", _parse_text),
}

# keys echoed into the artifacts of each command, besides command/seed/format
_ECHO_KEYS: Dict[str, Tuple[str, ...]] = {
    CMD_BOUNDS: ("beta_min", "beta_max", "samples"),
    CMD_TRADEOFF: ("samples",),
    CMD_ALPHA_MIN: ("q_grid", "gamma_grid"),
    CMD_SIMULATE: ("q", "gamma", "n", "strategy", "trials", "t", "p_live", "p_test", "angle"),
    CMD_VERIFY: ("verify_scale",),
}

@dataclass
class RunConfig:
    """Validated parameters of one CLI command."""
    command: str
    seed: int = Settings.DEFAULT_SEED
    output_format: str = OUTPUT_FORMATS[0]
    out: Optional[str] = None
    transcript: Optional[str] = None
    beta_min: float = CHSH_CLASSICAL_MAX
    beta_max: float = CHSH_QUANTUM_MAX
    samples: Optional[int] = None
    q_grid: Tuple[float, ...] = field(default_factory=lambda: _parse_grid(Settings.DEFAULT_Q_GRID))
    gamma_grid: Tuple[float, ...] = field(default_factory=lambda: _parse_grid(Settings.DEFAULT_GAMMA_GRID))
    q: float = Settings.DEFAULT_Q
    gamma: Fraction = field(default_factory=lambda: exact_gamma(Settings.DEFAULT_GAMMA))
    n: int = Settings.DEFAULT_ROUNDS
    strategy: str = STRATEGY_CLASSICAL
    t: Optional[float] = None
    p_live: Optional[float] = None
    p_test: Optional[float] = None
    angle: Optional[float] = None
    trials: int = Settings.DEFAULT_TRIALS
    verify_scale: str = VERIFY_SCALES[0]

    def __post_init__(self):
        self.gamma = exact_gamma(self.gamma)
        if self.samples is None:
            self.samples = (Settings.DEFAULT_TRADEOFF_SAMPLES if self.command == CMD_TRADEOFF
                            else Settings.DEFAULT_CURVE_SAMPLES)
        self.validate()

    @classmethod
    def parse_values(cls, values: Mapping[str, Optional[str]], source: str) -> Dict[str, Any]:
        """Map raw key=value strings onto typed field values."""
        parsed: Dict[str, Any] = {}
        for key, raw in values.items():
            if key not in _KEYS:
                raise ValidationException(f"Unknown config key '{key}' in {source}")
            if raw is None or str(raw).strip() == "":
                continue
            name, parser = _KEYS[key]
            try:
                parsed[name] = parser(raw)
            except (ValueError, ZeroDivisionError, ValidationException):
                raise ValidationException(f"Invalid value for '{key}' in {source}: {raw!r}")
        return parsed

    @classmethod
    def from_sources(cls, command: str, config_path: Optional[str] = None,
                     overrides: Optional[Mapping[str, Any]] = None) -> "RunConfig":
        """
        Build a config from an optional key=value file and flag overrides.

        Args:
            command: CLI command name
            config_path: Flat key=value file read with python-dotenv
            overrides: Flag values keyed like the config file; None entries are ignored

        Raises:
            ValidationException: On unknown keys, unparsable values or out-of-domain parameters
        """
        values: Dict[str, Any] = {}
        if config_path is not None:
            path = Path(config_path)
            if not path.is_file():
                raise ValidationException(f"Config file not found: {config_path}")
            values.update(cls.parse_values(dotenv_values(path), str(path)))
        flags = {k: str(v) for k, v in (overrides or {}).items() if v is not None}
        values.update(cls.parse_values(flags, "command-line flags"))
        return cls(command=command, **values)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValidationException(f"Unknown command '{self.command}'")
        if not 0 <= self.seed < SEED_LIMIT:
            raise ValidationException(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValidationException(f"format must be one of {OUTPUT_FORMATS}, got '{self.output_format}'")
        if self.samples < 2:
            raise ValidationException(f"samples must be at least 2, got {self.samples}")
        if self.command == CMD_BOUNDS:
            slack = Settings.BOUND_SLACK_TOLERANCE
            for name in ("beta_min", "beta_max"):
                value = getattr(self, name)
                if not CHSH_CLASSICAL_MAX - slack <= value <= CHSH_QUANTUM_MAX + slack:
                    raise ValidationException(f"{name} must lie in [2, 2*sqrt(2)], got {value}")
            if self.beta_max <= self.beta_min:
                raise ValidationException(f"beta_max must exceed beta_min, got [{self.beta_min}, {self.beta_max}]")
        if self.command == CMD_ALPHA_MIN:
            if not self.q_grid or not self.gamma_grid:
                raise ValidationException("q_grid and gamma_grid must not be empty")
            if any(not 0.0 <= q <= 1.0 for q in self.q_grid):
                raise ValidationException(f"q_grid values must lie in [0, 1], got {self.q_grid}")
            if any(not GAMMA_MIN <= g <= GAMMA_MAX for g in self.gamma_grid):
                raise ValidationException(f"gamma_grid values must lie in [3/4, 1], got {self.gamma_grid}")
        if self.command == CMD_SIMULATE:
            self._validate_simulation()
        if self.command == CMD_VERIFY and self.verify_scale not in VERIFY_SCALES:
            raise ValidationException(f"verify_scale must be one of {VERIFY_SCALES}, got '{self.verify_scale}'")

    def _validate_simulation(self) -> None:
        if not 0.0 <= self.q <= 1.0:
            raise ValidationException(f"q must lie in [0, 1], got {self.q}")
        if not GAMMA_MIN <= self.gamma <= GAMMA_MAX:
            raise ValidationException(f"gamma must lie in [3/4, 1], got {self.gamma}")
        if self.n < 1:
            raise ValidationException(f"n must be at least 1, got {self.n}")
        if self.trials < 1:
            raise ValidationException(f"trials must be at least 1, got {self.trials}")
        if self.strategy == STRATEGY_LAW and (self.p_live is None or self.p_test is None):
            raise ValidationException("strategy 'law' needs both p_live and p_test")
        if self.t is not None and not 0.0 <= self.t <= 1.0:
            raise ValidationException(f"t must lie in [0, 1], got {self.t}")

    def test_params(self) -> TestParams:
        return TestParams(q=self.q, gamma=self.gamma, n=self.n)

    def strategy_kwargs(self) -> Dict[str, Any]:
        """Constructor arguments for the configured attack strategy."""
        if self.strategy == STRATEGY_CURVE:
            return {"t": self.t} if self.t is not None else {"q": self.q, "gamma": float(self.gamma)}
        if self.strategy == STRATEGY_LAW:
            return {"p_live_correct": self.p_live, "p_test_win": self.p_test}
        if self.strategy == STRATEGY_QUANTUM_BISECTOR and self.angle is not None:
            return {"angle": self.angle}
        return {}

    def to_dict(self) -> Dict[str, Any]:
        """Echo of the parameters that determine this command's output."""
        echo: Dict[str, Any] = {"command": self.command, "seed": self.seed, "format": self.output_format}
        for key in _ECHO_KEYS[self.command]:
            value = getattr(self, _KEYS[key][0])
            if value is None:
                continue
            if isinstance(value, tuple):
                value = ",".join(repr(v) for v in value)
            elif isinstance(value, Fraction):
                value = str(value)
            echo[key] = value
        return echo
