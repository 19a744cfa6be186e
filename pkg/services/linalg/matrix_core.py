from typing import Optional, Tuple, Union

import numpy as np

from config.settings import Settings
from exceptions.wse_exceptions import DimensionMismatchException, ValidationException
from models.operators import ComplexMatrix, HermitianOperator, DensityMatrix

MatrixLike = Union[ComplexMatrix, np.ndarray]

class MatrixCore:
    """Small dense complex Hermitian linear algebra on frozen operator types.

    Every method is a pure function of its arguments; inputs are never mutated.
    """

    @staticmethod
    def _array(matrix: MatrixLike) -> np.ndarray:
        if isinstance(matrix, ComplexMatrix):
            return matrix.entries
        return np.asarray(matrix, dtype=complex)

    @staticmethod
    def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
        if a.shape != b.shape:
            raise DimensionMismatchException(f"Dimension mismatch: {a.shape} vs {b.shape}")

    @staticmethod
    def hermitize(matrix: MatrixLike) -> HermitianOperator:
        """(M + M†)/2 as a HermitianOperator; removes floating-point asymmetry."""
        m = MatrixCore._array(matrix)
        return HermitianOperator((m + m.conj().T) / 2)

    @staticmethod
    def hermitian_eig(matrix: HermitianOperator) -> Tuple[np.ndarray, np.ndarray]:
        """
        Eigendecomposition M = V diag(λ) V†.

        Args:
            matrix: Hermitian operator

        Returns:
            Eigenvalues in descending order and the matching orthonormal
            eigenvectors as columns. Each column is rotated so that its first
            component with modulus above 1e-12 is real and positive.
        """
        values, vectors = np.linalg.eigh(MatrixCore._array(matrix))
        order = np.argsort(-values, kind="stable")
        values = values[order]
        vectors = vectors[:, order].copy()
        for col in range(vectors.shape[1]):
            column = vectors[:, col]
            pivot = np.flatnonzero(np.abs(column) > 1e-12)
            if pivot.size:
                phase = column[pivot[0]] / abs(column[pivot[0]])
                vectors[:, col] = column * np.conj(phase)
        return values, vectors

    @staticmethod
    def operator_abs(matrix: HermitianOperator) -> HermitianOperator:
        """Operator modulus |M| = V diag(|λ|) V†."""
        values, vectors = MatrixCore.hermitian_eig(matrix)
        return MatrixCore.hermitize(vectors @ np.diag(np.abs(values)) @ vectors.conj().T)

    @staticmethod
    def operator_norm(matrix: HermitianOperator) -> float:
        """Schatten infinity-norm of a Hermitian operator."""
        values = np.linalg.eigvalsh(MatrixCore._array(matrix))
        return float(np.max(np.abs(values)))

    @staticmethod
    def multiply(a: MatrixLike, b: MatrixLike) -> ComplexMatrix:
        left, right = MatrixCore._array(a), MatrixCore._array(b)
        MatrixCore._check_same_dim(left, right)
        return ComplexMatrix(left @ right)

    @staticmethod
    def anticommutator(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
        """{A, B} = AB + BA."""
        left, right = MatrixCore._array(a), MatrixCore._array(b)
        MatrixCore._check_same_dim(left, right)
        return MatrixCore.hermitize(left @ right + right @ left)

    @staticmethod
    def commutator(a: MatrixLike, b: MatrixLike) -> ComplexMatrix:
        """[A, B] = AB - BA; anti-Hermitian for Hermitian A, B."""
        left, right = MatrixCore._array(a), MatrixCore._array(b)
        MatrixCore._check_same_dim(left, right)
        return ComplexMatrix(left @ right - right @ left)

    @staticmethod
    def modulus(matrix: MatrixLike) -> HermitianOperator:
        """|X| = sqrt(X† X) for an arbitrary square operator."""
        m = MatrixCore._array(matrix)
        values, vectors = MatrixCore.hermitian_eig(MatrixCore.hermitize(m.conj().T @ m))
        # X†X is PSD; clip rounding noise below zero
        root = np.sqrt(np.clip(values, 0.0, None))
        return MatrixCore.hermitize(vectors @ np.diag(root) @ vectors.conj().T)

    @staticmethod
    def tensor(a: MatrixLike, b: MatrixLike) -> ComplexMatrix:
        """Kronecker product A ⊗ B."""
        return ComplexMatrix(np.kron(MatrixCore._array(a), MatrixCore._array(b)))

    @staticmethod
    def _factor_dims(total: int, dims: Tuple[int, int]) -> Tuple[int, int]:
        d_a, d_b = dims
        if d_a < 1 or d_b < 1 or d_a * d_b != total:
            raise DimensionMismatchException(f"Dimensions {dims} do not factor {total}")
        return d_a, d_b

    @staticmethod
    def partial_trace_array(matrix: MatrixLike, dims: Tuple[int, int], keep: str) -> np.ndarray:
        """Partial trace of any operator on C^{d_A} ⊗ C^{d_B}, keeping 'A' or 'B'."""
        m = MatrixCore._array(matrix)
        d_a, d_b = MatrixCore._factor_dims(m.shape[0], dims)
        blocks = m.reshape(d_a, d_b, d_a, d_b)
        if keep == "A":
            return np.einsum("ijkj->ik", blocks)
        if keep == "B":
            return np.einsum("ijil->jl", blocks)
        raise ValidationException(f"keep must be 'A' or 'B', got {keep!r}")

    @staticmethod
    def partial_trace(rho: DensityMatrix, dims: Tuple[int, int], keep: str = "A") -> DensityMatrix:
        """Reduced state of a bipartite density matrix."""
        reduced = MatrixCore.partial_trace_array(rho, dims, keep)
        return DensityMatrix((reduced + reduced.conj().T) / 2)

    @staticmethod
    def expectation(operator: MatrixLike, rho: DensityMatrix) -> float:
        """Real part of tr(M ρ)."""
        m, r = MatrixCore._array(operator), MatrixCore._array(rho)
        MatrixCore._check_same_dim(m, r)
        return float(np.real(np.trace(m @ r)))

    @staticmethod
    def is_psd(matrix: MatrixLike, tolerance: float = Settings.CONSTRUCTION_TOLERANCE) -> bool:
        m = MatrixCore._array(matrix)
        return bool(np.linalg.eigvalsh((m + m.conj().T) / 2)[0] >= -tolerance)

    @staticmethod
    def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> HermitianOperator:
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        return MatrixCore.hermitize(scale * (g + g.conj().T) / 2)

    @staticmethod
    def random_observable(rng: np.random.Generator, dim: int) -> HermitianOperator:
        """Random Hermitian operator rescaled to operator norm at most one."""
        h = MatrixCore.random_hermitian(rng, dim)
        norm = MatrixCore.operator_norm(h)
        shrink = rng.uniform(0.5, 1.0) / norm if norm > 0 else 0.0
        return MatrixCore.hermitize(h.entries * shrink)

    @staticmethod
    def random_density_matrix(rng: np.random.Generator, dim: int, rank: Optional[int] = None) -> DensityMatrix:
        """Random state G G† / tr(G G†) with a complex Gaussian G of the given rank."""
        rank = rank or dim
        g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
        rho = g @ g.conj().T
        rho = rho / np.trace(rho).real
        return DensityMatrix((rho + rho.conj().T) / 2)
