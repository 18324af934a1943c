"""
Hamiltonians, unitary propagation and expectation values (hbar = 1).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Sequence

import numpy as np
import scipy.linalg as la

from config import HERMITIAN_TOL, IMAG_RESIDUE_TOL, INTERACTION_PHI
from src.utils.linalg_utils import (
    DimensionMismatchError,
    HermEigen,
    NotHermitianError,
    as_square,
    herm_eig,
    hermiticity_error,
    hermitize,
    kron,
)
from src.utils.state_utils import DensityMatrix, pauli, random_unitary

logger = logging.getLogger(__name__)


class NonHermitianObservableError(ValueError):
    """Raised when an observable is not Hermitian."""


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    mat: np.ndarray
    label: str = "custom"

    def __post_init__(self) -> None:
        arr = np.array(as_square(self.mat, "Hamiltonian"), dtype=complex)
        herm_eig(arr)  # raises NotHermitianError
        object.__setattr__(self, "mat", arr)

    @property
    def dim(self) -> int:
        return int(self.mat.shape[0])

    @cached_property
    def eigen(self) -> HermEigen:
        return herm_eig(self.mat)


@dataclass(frozen=True, eq=False)
class Propagator:
    t: float
    u: np.ndarray = field(repr=False)


def _ket(index: int, dim: int = 4) -> np.ndarray:
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return vec


def spectrum_4210_eigenpairs() -> list[tuple[float, np.ndarray]]:
    """
    Eigenpairs of the {4, 2, 1, 0} Hamiltonian.

    Two-qubit index is 2*s + a with |+>_z at index 0, so |+->=1, |-+>=2, |-->=3.
    """
    pp, pm, mp, mm = (_ket(i) for i in range(4))
    root = 1.0 / math.sqrt(2.0)
    return [
        (4.0, pm),
        (2.0, root * (pp + mp)),
        (1.0, mm),
        (0.0, root * (mp - pp)),
    ]


def hamiltonian_spectrum_4210() -> Hamiltonian:
    mat = sum(energy * np.outer(ket, ket.conj()) for energy, ket in spectrum_4210_eigenpairs())
    return Hamiltonian(mat=mat, label="spectrum_4210")


def hamiltonian_interaction(phi: float = INTERACTION_PHI) -> Hamiltonian:
    """(X/sqrt2) (x) (cos phi Y + sin phi Z) + 1 (x) [(Y - X) sin phi + Z cos phi]/2."""
    sx, sy, sz = pauli().elements
    eye = np.eye(2, dtype=complex)
    c, s = math.cos(phi), math.sin(phi)
    coupling = kron(sx / math.sqrt(2.0), c * sy + s * sz)
    local = kron(eye, 0.5 * ((sy - sx) * s + sz * c))
    return Hamiltonian(mat=coupling + local, label=f"interaction(phi={phi:.12g})")


def zero_hamiltonian(dim: int = 4) -> Hamiltonian:
    return Hamiltonian(mat=np.zeros((dim, dim), dtype=complex), label="zero")


def integer_spectrum_hamiltonian(dim: int, seed: int, max_level: int = 5) -> Hamiltonian:
    """Random eigenbasis with integer energies, so U(2 pi) is the identity."""
    rng = np.random.default_rng(seed)
    levels = rng.integers(0, max_level + 1, size=dim).astype(float)
    v = random_unitary(dim, seed + 1)
    mat = hermitize((v * levels) @ v.conj().T)
    return Hamiltonian(mat=mat, label=f"integer_spectrum(dim={dim}, seed={seed})")


def hamiltonian_from_unitary(u: np.ndarray, t: float) -> Hamiltonian:
    """Hermitian H with exp(-i H t) = u, from the complex Schur form of u."""
    arr = as_square(u, "unitary")
    schur_t, z = la.schur(arr, output="complex")
    phases = np.angle(np.diag(schur_t))
    mat = hermitize((z * (-phases / t)) @ z.conj().T)
    return Hamiltonian(mat=mat, label="from_unitary")


def hamiltonian_from_payload(payload: Dict[str, Any]) -> Hamiltonian:
    """Build a Hamiltonian from {"dim", "entries_re", "entries_im"} (row-major)."""
    dim = int(payload["dim"])
    re = np.asarray(payload["entries_re"], dtype=float)
    im = np.asarray(payload.get("entries_im", np.zeros(dim * dim)), dtype=float)
    if re.size != dim * dim or im.size != dim * dim:
        raise DimensionMismatchError(
            f"Hamiltonian entries must hold {dim * dim} values, got {re.size} and {im.size}"
        )
    return Hamiltonian(mat=(re + 1j * im).reshape(dim, dim), label="file")


def propagator(h: Hamiltonian, t: float) -> Propagator:
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    if t == 0.0:
        return Propagator(t=0.0, u=np.eye(h.dim, dtype=complex))
    eig = h.eigen
    v = eig.eigenvectors
    return Propagator(t=t, u=(v * np.exp(-1j * eig.eigenvalues * t)) @ v.conj().T)


def evolve(rho0: DensityMatrix, h: Hamiltonian, t: float) -> DensityMatrix:
    if rho0.dim != h.dim:
        raise DimensionMismatchError(
            f"state dimension {rho0.dim} does not match Hamiltonian dimension {h.dim}"
        )
    u = propagator(h, t).u
    return DensityMatrix(mat=hermitize(u @ rho0.mat @ u.conj().T))


def heisenberg(ops: Sequence[np.ndarray], h: Hamiltonian, t: float) -> list[np.ndarray]:
    """U^H O U for each operator, so that tr(rho(t) O) = tr(rho(0) U^H O U)."""
    u = propagator(h, t).u
    return [hermitize(u.conj().T @ check_observable(o) @ u) for o in ops]


def check_observable(o: np.ndarray) -> np.ndarray:
    arr = as_square(o, "observable")
    err = hermiticity_error(arr)
    if err > HERMITIAN_TOL:
        raise NonHermitianObservableError(f"observable is not Hermitian (error {err:.3e})")
    return arr


def expectation(rho: DensityMatrix, o: np.ndarray) -> float:
    arr = check_observable(o)
    if arr.shape[0] != rho.dim:
        raise DimensionMismatchError(
            f"observable dimension {arr.shape[0]} does not match state dimension {rho.dim}"
        )
    value = np.trace(rho.mat @ arr)
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise NonHermitianObservableError(
            f"expectation value has imaginary residue {value.imag:.3e}"
        )
    return float(value.real)


def qubit_observable(coefficients: Sequence[float]) -> np.ndarray:
    """O0 * 1 + O1 X + O2 Y + O3 Z."""
    coeffs = np.asarray(coefficients, dtype=float)
    if coeffs.shape != (4,):
        raise DimensionMismatchError(f"qubit observable needs 4 coefficients, got {coeffs.shape}")
    sx, sy, sz = pauli().elements
    return coeffs[0] * np.eye(2, dtype=complex) + coeffs[1] * sx + coeffs[2] * sy + coeffs[3] * sz


def spectral_observable(eigenvalues: Sequence[float], basis: np.ndarray | None = None) -> np.ndarray:
    values = np.asarray(eigenvalues, dtype=float)
    if basis is None:
        return np.diag(values).astype(complex)
    return hermitize((basis * values) @ basis.conj().T)


__all__ = [
    "Hamiltonian",
    "NonHermitianObservableError",
    "NotHermitianError",
    "Propagator",
    "check_observable",
    "evolve",
    "expectation",
    "hamiltonian_from_payload",
    "hamiltonian_from_unitary",
    "hamiltonian_interaction",
    "hamiltonian_spectrum_4210",
    "heisenberg",
    "integer_spectrum_hamiltonian",
    "propagator",
    "qubit_observable",
    "spectral_observable",
    "spectrum_4210_eigenpairs",
    "zero_hamiltonian",
]
