"""
Dense complex linear algebra kernels for small bipartite systems.

Everything here is a pure function of numpy arrays; the heavy lifting is done
by numpy.linalg, this module adds the tolerance checks and the error types the
rest of the package relies on.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, Tuple

import numpy as np

from config import COND_INFINITY_FLOOR, HERMITIAN_TOL, SVD_TRUNCATION_REL

logger = logging.getLogger(__name__)


class NotHermitianError(ValueError):
    """Raised when a matrix that must be Hermitian is not."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative decomposition fails to converge."""


class DimensionMismatchError(ValueError):
    """Raised when operand shapes do not fit together."""


class SingularMatrixError(RuntimeError):
    """Raised when a linear system has no usable pivot."""


@dataclass(frozen=True, eq=False)
class HermEigen:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reassemble(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def hermiticity_error(a: np.ndarray) -> float:
    arr = np.asarray(a)
    return float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(a) <= tol


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a kron b)[i*rows_b + k, j*cols_b + l] = a[i, j] * b[k, l]."""
    return np.kron(np.asarray(a), np.asarray(b))


def herm_eig(a: np.ndarray, tol: float = HERMITIAN_TOL) -> HermEigen:
    arr = as_square(a)
    err = hermiticity_error(arr)
    if err > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max |a - a^H| = {err:.3e})")
    try:
        values, vectors = np.linalg.eigh(arr)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigendecomposition failed: {exc}") from exc
    return HermEigen(eigenvalues=values, eigenvectors=vectors)


def partial_trace(
    m: np.ndarray, dim_s: int, dim_a: int, keep: Literal["S", "A"] = "S"
) -> np.ndarray:
    """Trace out one factor of a (dim_s * dim_a)-dimensional operator."""
    arr = as_square(m)
    if arr.shape[0] != dim_s * dim_a:
        raise DimensionMismatchError(
            f"operator of dimension {arr.shape[0]} does not split as {dim_s} x {dim_a}"
        )
    blocks = arr.reshape(dim_s, dim_a, dim_s, dim_a)
    if keep == "S":
        return np.einsum("ijkj->ik", blocks)
    if keep == "A":
        return np.einsum("ijil->jl", blocks)
    raise ValueError(f"keep must be 'S' or 'A', got {keep!r}")


def svd(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Thin SVD returning (U, s, V) with a = U diag(s) V^H.

    Singular values below SVD_TRUNCATION_REL * s_max are reported as zero.
    """
    arr = np.asarray(a, dtype=complex)
    try:
        u, s, vh = np.linalg.svd(arr, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD failed: {exc}") from exc
    if s.size and s[0] > 0:
        s = np.where(s < SVD_TRUNCATION_REL * s[0], 0.0, s)
    return u, s, vh.conj().T


def det_and_cofactors(m: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Determinant and cofactor matrix of a real square matrix.

    cof[i, j] = (-1)**(i + j) * minor(i, j); singular input is fine.
    """
    arr = np.asarray(as_square(m, "real matrix"), dtype=float)
    n = arr.shape[0]
    det = float(np.linalg.det(arr))
    if n == 1:
        return det, np.ones((1, 1))

    cof = np.empty((n, n))
    for i in range(n):
        rows = np.delete(arr, i, axis=0)
        for j in range(n):
            minor = np.delete(rows, j, axis=1)
            cof[i, j] = (-1.0) ** (i + j) * np.linalg.det(minor)
    return det, cof


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    arr = np.asarray(as_square(a), dtype=float)
    rhs = np.asarray(b, dtype=float)
    if rhs.shape != (arr.shape[0],):
        raise DimensionMismatchError(
            f"right-hand side of length {rhs.shape} does not match {arr.shape}"
        )
    try:
        return np.linalg.solve(arr, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"linear system is singular: {exc}") from exc


def cond2(a: np.ndarray) -> float:
    """Ratio of extreme singular values; inf when the smallest one vanishes."""
    s = np.linalg.svd(np.asarray(as_square(a)), compute_uv=False)
    if s[-1] < COND_INFINITY_FLOOR:
        return float("inf")
    return float(s[0] / s[-1])


def hermitize(a: np.ndarray) -> np.ndarray:
    arr = np.asarray(a)
    return 0.5 * (arr + arr.conj().T)


__all__ = [
    "ConvergenceError",
    "DimensionMismatchError",
    "HermEigen",
    "NotHermitianError",
    "SingularMatrixError",
    "as_square",
    "cond2",
    "det_and_cofactors",
    "herm_eig",
    "hermitize",
    "hermiticity_error",
    "is_hermitian",
    "kron",
    "partial_trace",
    "solve",
    "svd",
]
