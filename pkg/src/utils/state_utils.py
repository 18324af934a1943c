"""
Density matrices, coherence vectors and the Pauli / generalized Gell-Mann bases.

Conventions:
    * Pauli matrices carry eigenvalues +/-1, so a qubit state is (1 + r.sigma)/2.
    * For dimension N the basis T_a has N^2 - 1 traceless Hermitian elements with
      tr(T_a T_b) = 2 delta_ab, ordered symmetric, antisymmetric, then diagonal,
      each family in lexicographic (j, k) order. For N = 2 this is (X, Y, Z).
    * rho = I/N + (1/2) sum_a r_a T_a, hence r_a = tr(rho T_a).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from config import BLOCH_NORM_TOL, HERMITIAN_TOL, PSD_FLOOR, TRACE_TOL
from src.utils.linalg_utils import (
    DimensionMismatchError,
    NotHermitianError,
    as_square,
    hermiticity_error,
    kron,
)

logger = logging.getLogger(__name__)


class InvalidStateError(ValueError):
    """Raised when a matrix is not a valid density matrix."""


class NotPositiveError(InvalidStateError):
    """Raised when a candidate state has a negative eigenvalue below the PSD floor."""


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    dim: int
    elements: Tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def gram(self) -> np.ndarray:
        """Real matrix of pairwise traces tr(T_a T_b)."""
        return np.array(
            [[np.trace(a @ b).real for b in self.elements] for a in self.elements]
        )


@dataclass(frozen=True, eq=False)
class CoherenceVector:
    dim: int
    components: np.ndarray

    def __post_init__(self) -> None:
        comps = np.asarray(self.components, dtype=float)
        if comps.shape != (self.dim * self.dim - 1,):
            raise DimensionMismatchError(
                f"dimension {self.dim} needs {self.dim * self.dim - 1} components, "
                f"got {comps.shape}"
            )
        object.__setattr__(self, "components", comps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.components))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density matrix; build it through `from_matrix`."""

    mat: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.mat.shape[0])

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.mat)

    @classmethod
    def from_matrix(cls, mat: np.ndarray) -> "DensityMatrix":
        arr = np.array(as_square(mat, "density matrix"), dtype=complex)
        validate_density(arr)
        return cls(mat=arr)


def validate_density(mat: np.ndarray) -> None:
    err = hermiticity_error(mat)
    if err > HERMITIAN_TOL:
        raise NotHermitianError(f"density matrix is not Hermitian (error {err:.3e})")
    trace = np.trace(mat)
    if abs(trace - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"density matrix trace is {trace.real:.15g}, expected 1")
    smallest = float(np.linalg.eigvalsh(mat)[0])
    if smallest < PSD_FLOOR:
        raise NotPositiveError(
            f"density matrix has eigenvalue {smallest:.3e} below floor {PSD_FLOOR:.0e}"
        )


def _pauli_matrices() -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return sx, sy, sz


def pauli() -> OperatorBasis:
    return OperatorBasis(dim=2, elements=_pauli_matrices())


@lru_cache(maxsize=16)
def gell_mann(n: int) -> OperatorBasis:
    if n < 2:
        raise ValueError(f"basis dimension must be at least 2, got {n}")

    symmetric, antisymmetric, diagonal = [], [], []
    for j in range(n):
        for k in range(j + 1, n):
            sym = np.zeros((n, n), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            symmetric.append(sym)

            anti = np.zeros((n, n), dtype=complex)
            anti[j, k] = -1j
            anti[k, j] = 1j
            antisymmetric.append(anti)

    for level in range(1, n):
        diag = np.zeros(n, dtype=complex)
        diag[:level] = 1.0
        diag[level] = -level
        diagonal.append(np.sqrt(2.0 / (level * (level + 1))) * np.diag(diag))

    return OperatorBasis(dim=n, elements=tuple(symmetric + antisymmetric + diagonal))


def basis_for(dim: int) -> OperatorBasis:
    return pauli() if dim == 2 else gell_mann(dim)


def density_from_coherence(v: CoherenceVector) -> DensityMatrix:
    basis = basis_for(v.dim)
    mat = np.eye(v.dim, dtype=complex) / v.dim
    for r_a, t_a in zip(v.components, basis.elements):
        mat = mat + 0.5 * r_a * t_a
    return DensityMatrix.from_matrix(mat)


def coherence_from_density(rho: DensityMatrix) -> CoherenceVector:
    basis = basis_for(rho.dim)
    comps = np.array([np.trace(rho.mat @ t_a).real for t_a in basis.elements])
    return CoherenceVector(dim=rho.dim, components=comps)


def ancilla_state(lam: Sequence[float]) -> DensityMatrix:
    """Qubit ancilla with Bloch vector lam; (0, 0, lam) is the single-axis form."""
    vec = np.asarray(lam, dtype=float)
    if vec.shape != (3,):
        raise DimensionMismatchError(f"ancilla Bloch vector needs 3 components, got {vec.shape}")
    length = float(np.linalg.norm(vec))
    if length > 1.0 + BLOCH_NORM_TOL:
        raise NotPositiveError(f"ancilla Bloch vector has length {length:.12g} > 1")
    return density_from_coherence(CoherenceVector(dim=2, components=vec))


def product_state(s: DensityMatrix, a: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(mat=kron(s.mat, a.mat))


def pure_state(ket: np.ndarray) -> DensityMatrix:
    psi = np.asarray(ket, dtype=complex).reshape(-1)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(mat=np.outer(psi, psi.conj()))


def random_ket(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_state(dim: int, pure: bool, seed: int) -> DensityMatrix:
    if dim < 2:
        raise ValueError(f"state dimension must be at least 2, got {dim}")
    if pure:
        return pure_state(random_ket(dim, seed))
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    mat = g @ g.conj().T
    mat = 0.5 * (mat + mat.conj().T)
    return DensityMatrix.from_matrix(mat / np.trace(mat).real)


__all__ = [
    "CoherenceVector",
    "DensityMatrix",
    "InvalidStateError",
    "NotPositiveError",
    "OperatorBasis",
    "ancilla_state",
    "basis_for",
    "coherence_from_density",
    "density_from_coherence",
    "gell_mann",
    "pauli",
    "product_state",
    "pure_state",
    "random_ket",
    "random_state",
    "random_unitary",
    "validate_density",
]
