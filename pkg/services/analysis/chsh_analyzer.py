import math
from typing import Sequence, Tuple

import numpy as np

from config.settings import Settings
from constants.Constants import (
    IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z, PHI_PLUS, CHSH_QUANTUM_MAX
)
from exceptions.wse_exceptions import ValidationException
from models.operators import HermitianOperator, DensityMatrix
from models.device_setup import DeviceSetup, ChshReport, ChshBoundChain
from services.linalg.matrix_core import MatrixCore
from utils.debug_utils import DebugUtils
from .base_analyzer import BaseAnalyzer

class ChshAnalyzer(BaseAnalyzer):
    """CHSH value, absolute effective anticommutator and the bound relating them."""

    @staticmethod
    def bloch_observable(vector: Sequence[float], offset: float = 0.0) -> HermitianOperator:
        """Qubit observable offset·𝟙 + n_x σ_x + n_y σ_y + n_z σ_z for n = (x, y, z)."""
        x, y, z = (float(c) for c in vector)
        return MatrixCore.hermitize(offset * IDENTITY_2 + x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z)

    @staticmethod
    def chsh_operator(setup: DeviceSetup) -> HermitianOperator:
        """W = A0⊗B0 + A0⊗B1 + A1⊗B0 - A1⊗B1."""
        a0, a1 = setup.a0.entries, setup.a1.entries
        b0, b1 = setup.b0.entries, setup.b1.entries
        w = np.kron(a0, b0) + np.kron(a0, b1) + np.kron(a1, b0) - np.kron(a1, b1)
        return MatrixCore.hermitize(w)

    @staticmethod
    def chsh_value(setup: DeviceSetup) -> float:
        """β = tr(W ρ_AB)."""
        return MatrixCore.expectation(ChshAnalyzer.chsh_operator(setup), setup.rho_ab)

    @staticmethod
    def winning_probability(beta: float) -> float:
        """CHSH game winning probability 1/2 + β/8."""
        beta = BaseAnalyzer._validate_range(
            "beta", beta, -CHSH_QUANTUM_MAX, CHSH_QUANTUM_MAX, Settings.BOUND_SLACK_TOLERANCE
        )
        return 0.5 + beta / 8.0

    @staticmethod
    def absolute_effective_anticommutator(a0: HermitianOperator, a1: HermitianOperator,
                                          rho_a: DensityMatrix) -> float:
        """ε₊ = ½ tr(|{A0, A1}| ρ_A), clamped to [0, 1]."""
        anticommutator = MatrixCore.anticommutator(a0, a1)
        value = 0.5 * MatrixCore.expectation(MatrixCore.operator_abs(anticommutator), rho_a)
        return BaseAnalyzer._clamp(value, 0.0, 1.0)

    @staticmethod
    def effective_anticommutator(a0: HermitianOperator, a1: HermitianOperator,
                                 rho_a: DensityMatrix) -> float:
        """Signed ε = ½ tr({A0, A1} ρ_A)."""
        return 0.5 * MatrixCore.expectation(MatrixCore.anticommutator(a0, a1), rho_a)

    @staticmethod
    def bound_rhs(eps_plus: float) -> float:
        """2 sqrt(1 + sqrt(1 - ε₊²))."""
        eps_plus = BaseAnalyzer._clamp(eps_plus, 0.0, 1.0)
        return 2.0 * math.sqrt(1.0 + math.sqrt(1.0 - eps_plus ** 2))

    @staticmethod
    def reduced_state_a(setup: DeviceSetup) -> DensityMatrix:
        return MatrixCore.partial_trace(setup.rho_ab, setup.dims, keep="A")

    @staticmethod
    def verify_beta_eps_bound(setup: DeviceSetup) -> ChshReport:
        """
        Compare |β| with 2 sqrt(1 + sqrt(1 - ε₊²)) for one setup.

        Returns:
            ChshReport; saturated is set when the slack is at most 1e-6
        """
        beta = ChshAnalyzer.chsh_value(setup)
        eps_plus = ChshAnalyzer.absolute_effective_anticommutator(
            setup.a0, setup.a1, ChshAnalyzer.reduced_state_a(setup)
        )
        rhs = ChshAnalyzer.bound_rhs(eps_plus)
        slack = rhs - abs(beta)
        if slack < -Settings.BOUND_SLACK_TOLERANCE:
            DebugUtils.error(f"CHSH bound violated: beta={beta:.12g}, eps_plus={eps_plus:.12g}, slack={slack:.3e}")
        return ChshReport(
            beta=beta,
            eps_plus=eps_plus,
            bound_rhs=rhs,
            slack=slack,
            saturated=slack <= Settings.SATURATION_TOLERANCE
        )

    @staticmethod
    def bound_chain(setup: DeviceSetup) -> ChshBoundChain:
        """Evaluate each intermediate quantity of the β ↔ ε₊ argument for a setup."""
        rho_a = ChshAnalyzer.reduced_state_a(setup)
        w = ChshAnalyzer.chsh_operator(setup).entries
        beta = MatrixCore.expectation(w, setup.rho_ab)
        w_squared = MatrixCore.expectation(w @ w, setup.rho_ab)

        commutator_abs = MatrixCore.modulus(MatrixCore.commutator(setup.a0, setup.a1))
        anticommutator_abs = MatrixCore.operator_abs(MatrixCore.anticommutator(setup.a0, setup.a1))
        commutator_mean = MatrixCore.expectation(commutator_abs, rho_a)
        commutator_square_mean = MatrixCore.expectation(commutator_abs.entries @ commutator_abs.entries, rho_a)
        anticommutator_square_mean = MatrixCore.expectation(
            anticommutator_abs.entries @ anticommutator_abs.entries, rho_a
        )
        eps_plus = BaseAnalyzer._clamp(0.5 * MatrixCore.expectation(anticommutator_abs, rho_a), 0.0, 1.0)

        return ChshBoundChain(
            beta_squared=beta ** 2,
            w_squared=w_squared,
            commutator_term=4.0 + 2.0 * commutator_mean,
            commutator_square_term=4.0 + 2.0 * math.sqrt(max(commutator_square_mean, 0.0)),
            anticommutator_term=4.0 + 2.0 * math.sqrt(max(4.0 - anticommutator_square_mean, 0.0)),
            eps_term=4.0 * (1.0 + math.sqrt(1.0 - eps_plus ** 2))
        )

    @staticmethod
    def ideal_setup() -> DeviceSetup:
        """Maximally entangled pair with σ_z, σ_x on Alice's side and the CHSH-optimal pair on Bob's."""
        return DeviceSetup(
            rho_ab=DensityMatrix.from_vector(PHI_PLUS),
            a0=HermitianOperator(SIGMA_Z),
            a1=HermitianOperator(SIGMA_X),
            b0=MatrixCore.hermitize((SIGMA_Z + SIGMA_X) / math.sqrt(2)),
            b1=MatrixCore.hermitize((SIGMA_Z - SIGMA_X) / math.sqrt(2))
        )

    @staticmethod
    def alice_bloch_vectors(theta: float) -> Tuple[np.ndarray, np.ndarray]:
        """Bloch vectors (x, y, z) of A0 = σ_z and A1 = cos θ σ_z + sin θ σ_x."""
        return np.array([0.0, 0.0, 1.0]), np.array([math.sin(theta), 0.0, math.cos(theta)])

    @staticmethod
    def saturating_setup(theta: float) -> DeviceSetup:
        """
        Rank-1 projective qubit setup on |Φ₊⟩ saturating the β ↔ ε₊ bound.

        Alice measures σ_z and cos θ σ_z + sin θ σ_x; Bob measures along the
        normalised sum and difference of Alice's Bloch vectors. On |Φ₊⟩ the
        xz-plane correlations are plain inner products, so this choice gives
        β = |a0 + a1| + |a0 - a1| = 2 sqrt(1 + sin θ) while ε₊ = cos θ.

        Args:
            theta: Angle between Alice's Bloch vectors, in (0, π/2]
        """
        if not (0.0 < float(theta) <= math.pi / 2 + 1e-15):
            raise ValidationException(f"theta must lie in (0, pi/2], got {theta}")
        a0_vec, a1_vec = ChshAnalyzer.alice_bloch_vectors(theta)
        plus, minus = a0_vec + a1_vec, a0_vec - a1_vec
        return DeviceSetup(
            rho_ab=DensityMatrix.from_vector(PHI_PLUS),
            a0=ChshAnalyzer.bloch_observable(a0_vec),
            a1=ChshAnalyzer.bloch_observable(a1_vec),
            b0=ChshAnalyzer.bloch_observable(plus / np.linalg.norm(plus)),
            b1=ChshAnalyzer.bloch_observable(minus / np.linalg.norm(minus))
        )

    @staticmethod
    def optimal_bob_value(a0_vec: Sequence[float], a1_vec: Sequence[float]) -> float:
        """Best CHSH value over Bob's projective qubit observables on |Φ₊⟩ for xz-plane Alice vectors."""
        a0_vec, a1_vec = np.asarray(a0_vec, dtype=float), np.asarray(a1_vec, dtype=float)
        return float(np.linalg.norm(a0_vec + a1_vec) + np.linalg.norm(a0_vec - a1_vec))

    @staticmethod
    def brute_force_bob_value(setup: DeviceSetup, points: int = 61, rounds: int = 5) -> float:
        """
        Maximise β over Bob's projective qubit observables by a zooming sphere grid.

        Only Alice's observables and the state are taken from the setup; Bob's
        two observables are searched independently since β is linear in each.
        """
        if setup.dims[1] != 2:
            raise ValidationException("Brute-force Bob search needs a qubit on Bob's side")
        a0, a1 = setup.a0.entries, setup.a1.entries
        best_total = 0.0
        for alice_part in (a0 + a1, a0 - a1):
            # linear functional n -> tr[(X ⊗ n·σ) ρ]
            coefficients = np.array([
                MatrixCore.expectation(np.kron(alice_part, pauli), setup.rho_ab)
                for pauli in (SIGMA_X, SIGMA_Y, SIGMA_Z)
            ])
            polar_lo, polar_hi, azim_lo, azim_hi = 0.0, math.pi, 0.0, 2 * math.pi
            best_value, best_polar, best_azim = -np.inf, 0.0, 0.0
            for _ in range(rounds):
                polar = np.linspace(polar_lo, polar_hi, points)
                azim = np.linspace(azim_lo, azim_hi, points)
                pp, aa = np.meshgrid(polar, azim, indexing="ij")
                values = (coefficients[0] * np.sin(pp) * np.cos(aa)
                          + coefficients[1] * np.sin(pp) * np.sin(aa)
                          + coefficients[2] * np.cos(pp))
                i, j = np.unravel_index(np.argmax(values), values.shape)
                if values[i, j] > best_value:
                    best_value, best_polar, best_azim = float(values[i, j]), polar[i], azim[j]
                polar_step = (polar_hi - polar_lo) / (points - 1)
                azim_step = (azim_hi - azim_lo) / (points - 1)
                polar_lo, polar_hi = max(0.0, best_polar - 2 * polar_step), min(math.pi, best_polar + 2 * polar_step)
                azim_lo, azim_hi = best_azim - 2 * azim_step, best_azim + 2 * azim_step
            best_total += best_value
        return best_total

    @staticmethod
    def random_bloch_vector(rng: np.random.Generator) -> np.ndarray:
        """Uniform point on the unit sphere from seeded uniform angles."""
        polar = math.acos(rng.uniform(-1.0, 1.0))
        azimuth = rng.uniform(0.0, 2 * math.pi)
        return np.array([math.sin(polar) * math.cos(azimuth),
                         math.sin(polar) * math.sin(azimuth),
                         math.cos(polar)])

    @staticmethod
    def random_qubit_observable(rng: np.random.Generator) -> HermitianOperator:
        """c·𝟙 + r n·σ with |c| + r <= 1; projective (c = 0, r = 1) half of the time."""
        direction = ChshAnalyzer.random_bloch_vector(rng)
        if rng.uniform() < 0.5:
            return ChshAnalyzer.bloch_observable(direction)
        length = rng.uniform(0.0, 1.0)
        offset = rng.uniform(-(1.0 - length), 1.0 - length)
        return ChshAnalyzer.bloch_observable(length * direction, offset)

    @staticmethod
    def random_setup(rng: np.random.Generator) -> DeviceSetup:
        """Random two-qubit setup: mixture of two random pure states, random observables."""
        weight = rng.uniform(0.0, 1.0)
        pure = [MatrixCore.random_density_matrix(rng, 4, rank=1).entries for _ in range(2)]
        rho = weight * pure[0] + (1.0 - weight) * pure[1]
        return DeviceSetup(
            rho_ab=DensityMatrix((rho + rho.conj().T) / 2),
            a0=ChshAnalyzer.random_qubit_observable(rng),
            a1=ChshAnalyzer.random_qubit_observable(rng),
            b0=ChshAnalyzer.random_qubit_observable(rng),
            b1=ChshAnalyzer.random_qubit_observable(rng)
        )
