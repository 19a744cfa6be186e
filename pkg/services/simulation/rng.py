"""Deterministic random streams for reproducible simulations.

Every trial owns an independent Philox-4x64 counter-based stream keyed by
(master seed, trial index), so results never depend on how trials are spread
over workers.
"""

import numpy as np

class DeterministicRNG:
    """Seeded wrapper around a numpy Philox generator."""

    def __init__(self, seed: int, stream: int = 0):
        if seed < 0 or stream < 0:
            raise ValueError("seed and stream must be non-negative")
        self._seed = int(seed)
        self._stream = int(stream)
        self._rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([self._seed, self._stream])))

    @classmethod
    def for_trial(cls, master_seed: int, trial_index: int) -> "DeterministicRNG":
        return cls(master_seed, trial_index)

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def stream(self) -> int:
        return self._stream

    @property
    def generator(self) -> np.random.Generator:
        return self._rng

    def random(self) -> float:
        return float(self._rng.random())

    def block(self, rows: int, columns: int) -> np.ndarray:
        """rows x columns uniforms on [0, 1), drawn in one call."""
        return self._rng.random((rows, columns))

    def bit(self) -> int:
        return int(self._rng.random() < 0.5)

    def bernoulli(self, p: float) -> int:
        return int(self._rng.random() < p)
