"""
Entanglement measures for bipartite states: reduced-state entropy of pure states,
Schmidt decomposition, Wootters concurrence and entanglement of formation for two
qubits, plus the Schmidt-basis observables that hide an entangled state from the
single-side expectation values. Entropies are in bits.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from config import ENTROPY_EIG_FLOOR, KET_NORM_TOL, PURITY_TOL, SCHMIDT_PRODUCT_TOL
from src.utils.linalg_utils import DimensionMismatchError, kron, partial_trace, svd
from src.utils.state_utils import DensityMatrix, pauli
from src.utils.tomography_utils import ObservablePair

logger = logging.getLogger(__name__)


class NotPureError(ValueError):
    """Raised when an entropy-of-entanglement is requested for a mixed total state."""


class ProductStateError(ValueError):
    """Raised when a ket has no entanglement to build a counterexample from."""


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    coefficients: np.ndarray  # squared Schmidt coefficients, descending
    basis_s: np.ndarray  # columns |e_i>
    basis_a: np.ndarray  # columns |f_i>

    def ket(self) -> np.ndarray:
        terms = [
            np.sqrt(lam) * kron(self.basis_s[:, i], self.basis_a[:, i])
            for i, lam in enumerate(self.coefficients)
        ]
        return np.sum(terms, axis=0)


@dataclass(frozen=True)
class EntanglementReport:
    t: float
    entropy: Optional[float]
    concurrence: Optional[float]
    eof: Optional[float]
    purity: float


def von_neumann_entropy(mat: np.ndarray) -> float:
    values = np.linalg.eigvalsh(mat)
    values = values[values > ENTROPY_EIG_FLOOR]
    return float(-np.sum(values * np.log2(values))) + 0.0


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def is_pure(rho: DensityMatrix, tol: float = PURITY_TOL) -> bool:
    return abs(rho.purity - 1.0) <= tol


def entropy_pure(
    rho_t: DensityMatrix, dim_s: int, dim_a: int, side: Literal["S", "A"] = "S"
) -> float:
    if not is_pure(rho_t):
        raise NotPureError(
            f"total state has purity {rho_t.purity:.12g}; reduced entropy is not an "
            "entanglement measure for mixed states"
        )
    return von_neumann_entropy(partial_trace(rho_t.mat, dim_s, dim_a, keep=side))


def purity_deficit(rho_t: DensityMatrix, dim_s: int, dim_a: int) -> float:
    """1 - tr(rho_S^2); zero exactly when a pure total state is a product."""
    reduced = partial_trace(rho_t.mat, dim_s, dim_a, keep="S")
    return float(1.0 - np.real(np.trace(reduced @ reduced)))


def dominant_ket(rho: DensityMatrix) -> np.ndarray:
    """Eigenvector of the largest eigenvalue; the state ket when rho is pure."""
    values, vectors = np.linalg.eigh(rho.mat)
    return vectors[:, -1]


def _fix_phase(vec: np.ndarray) -> complex:
    for entry in vec:
        if abs(entry) > 1e-12:
            return entry / abs(entry)
    return 1.0 + 0.0j


def schmidt(psi: np.ndarray, dim_s: int, dim_a: int) -> SchmidtForm:
    ket = np.asarray(psi, dtype=complex).reshape(-1)
    if ket.size != dim_s * dim_a:
        raise DimensionMismatchError(f"ket of length {ket.size} is not {dim_s} x {dim_a}")
    norm = float(np.linalg.norm(ket))
    if abs(norm - 1.0) > KET_NORM_TOL:
        raise ValueError(f"ket must be normalized, got norm {norm:.12g}")

    u, s, v = svd(ket.reshape(dim_s, dim_a))
    # psi_jk = sum_i s_i u_ji conj(v_ki), so |f_i> has components conj(v[:, i])
    basis_s = u.copy()
    basis_a = v.conj()
    for i in range(basis_s.shape[1]):
        phase = _fix_phase(basis_s[:, i])
        basis_s[:, i] = basis_s[:, i] / phase
        basis_a[:, i] = basis_a[:, i] * phase
    return SchmidtForm(coefficients=s**2, basis_s=basis_s, basis_a=basis_a)


def concurrence(rho: DensityMatrix) -> float:
    if rho.dim != 4:
        raise DimensionMismatchError(f"concurrence needs a two-qubit state, got dimension {rho.dim}")
    values, vectors = np.linalg.eigh(rho.mat)
    sqrt_rho = (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T
    sy = pauli().elements[1]
    flip = kron(sy, sy)
    mu = np.linalg.svd(sqrt_rho @ flip @ sqrt_rho.conj(), compute_uv=False)
    return float(min(1.0, max(0.0, mu[0] - mu[1] - mu[2] - mu[3])))


def eof_from_concurrence(c: float) -> float:
    return binary_entropy(0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c))))


def eof(rho: DensityMatrix) -> float:
    return eof_from_concurrence(concurrence(rho))


def entanglement_report(rho_t: DensityMatrix, dim_s: int, dim_a: int, t: float) -> EntanglementReport:
    entropy = entropy_pure(rho_t, dim_s, dim_a) if is_pure(rho_t) else None
    conc = form = None
    if dim_s == dim_a == 2:
        conc = concurrence(rho_t)
        form = eof_from_concurrence(conc)
    return EntanglementReport(t=t, entropy=entropy, concurrence=conc, eof=form, purity=rho_t.purity)


def counterexample_observables(psi: np.ndarray, omega_1: float, omega_2: float) -> ObservablePair:
    """
    O_S = w1 (|e1><e2| + h.c.), O_A = w2 (|f1><f2| + h.c.) in the Schmidt bases of psi.

    On psi both single-side expectations vanish and <O_S (x) O_A> equals
    2 sqrt(l1 (1 - l1)) w1 w2.
    """
    form = schmidt(psi, 2, 2)
    if form.coefficients[-1] < SCHMIDT_PRODUCT_TOL:
        raise ProductStateError(
            f"Schmidt coefficients {form.coefficients.tolist()} describe a product state"
        )
    e1, e2 = form.basis_s[:, 0], form.basis_s[:, 1]
    f1, f2 = form.basis_a[:, 0], form.basis_a[:, 1]
    o_s = omega_1 * (np.outer(e1, e2.conj()) + np.outer(e2, e1.conj()))
    o_a = omega_2 * (np.outer(f1, f2.conj()) + np.outer(f2, f1.conj()))
    return ObservablePair(o_s=o_s, o_a=o_a)


def schmidt_embedding_unitary(psi: np.ndarray) -> np.ndarray:
    """
    Two-qubit unitary sending |0>|0> to psi and |1>|0> to the orthogonal ket
    sqrt(l2)|e1 f1> - sqrt(l1)|e2 f2>.

    Any system state paired with ancilla |0> then lands in span{|e1 f1>, |e2 f2>},
    where both Schmidt-basis observables average to zero.
    """
    form = schmidt(psi, 2, 2)
    (l1, l2) = form.coefficients
    e1, e2 = form.basis_s[:, 0], form.basis_s[:, 1]
    f1, f2 = form.basis_a[:, 0], form.basis_a[:, 1]
    u = np.empty((4, 4), dtype=complex)
    u[:, 0] = form.ket()
    u[:, 1] = kron(e1, f2)
    u[:, 2] = np.sqrt(l2) * kron(e1, f1) - np.sqrt(l1) * kron(e2, f2)
    u[:, 3] = kron(e2, f1)
    return u


__all__ = [
    "EntanglementReport",
    "NotPureError",
    "ProductStateError",
    "SchmidtForm",
    "binary_entropy",
    "concurrence",
    "counterexample_observables",
    "dominant_ket",
    "entanglement_report",
    "entropy_pure",
    "eof",
    "eof_from_concurrence",
    "is_pure",
    "purity_deficit",
    "schmidt",
    "schmidt_embedding_unitary",
    "von_neumann_entropy",
]
