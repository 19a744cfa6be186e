from typing import Any, Dict, Optional
import os

class Settings:
    """Configuration management for the application."""

    # Numerical tolerances
    CONSTRUCTION_TOLERANCE = 1e-12  # Hermiticity, positivity, trace
    IDENTITY_TOLERANCE = 1e-10  # algebraic identities, eigendecomposition
    BOUND_SLACK_TOLERANCE = 1e-9
    SATURATION_TOLERANCE = 1e-6

    # Exact-oracle size guards
    SEQUENTIAL_DP_MAX_NODES = 10_000_000
    EXHAUSTIVE_MAX_STRATEGIES = 1_000_000

    # k search for alpha_min
    K_INITIAL_STEP = 0.25
    K_SEARCH_CEILING = 1e6
    K_TOLERANCE = 1e-10
    GOLDEN_MAX_ITERATIONS = 500

    # Taylor slope finite-difference step
    TAYLOR_STEP = 1e-5

    # Logging Settings
    LOG_LEVEL = os.getenv("WSE_DI_LOG_LEVEL", "WARNING")
    LOG_FILE: Optional[str] = os.getenv("WSE_DI_LOG_FILE")

    # Run defaults
    DEFAULT_SEED = 20160125
    DEFAULT_CURVE_SAMPLES = 100
    DEFAULT_TRADEOFF_SAMPLES = 1000
    DEFAULT_TRIALS = 10_000
    DEFAULT_ROUNDS = 20
    DEFAULT_Q = 0.5
    DEFAULT_GAMMA = "0.85"
    DEFAULT_Q_GRID = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"
    DEFAULT_GAMMA_GRID = "0.75,0.8,0.85,0.9,0.95"
    CONFIDENCE_LEVEL = 0.99

    THREADS_ENV_VAR = "WSE_DI_THREADS"

    @classmethod
    def worker_count(cls) -> int:
        """Number of workers allowed for trial- or cell-level parallelism."""
        raw = os.getenv(cls.THREADS_ENV_VAR, "1")
        try:
            return max(1, int(raw))
        except ValueError:
            return 1

    @classmethod
    def get_search_settings(cls) -> Dict[str, Any]:
        """Get settings of the one-dimensional k search."""
        return {
            "initial_step": cls.K_INITIAL_STEP,
            "ceiling": cls.K_SEARCH_CEILING,
            "tolerance": cls.K_TOLERANCE,
            "max_iterations": cls.GOLDEN_MAX_ITERATIONS
        }
