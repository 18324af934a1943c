"""
Affine measurement map p(t) = Omega(t) . r + k(t) between the initial coherence
vector r of the system and the expectation values measured at time t.

The map is built by probing: k is the response to the maximally mixed system
state and column a of Omega is the response to a small displacement along T_a.
Because expectation values are exactly affine in r there is no truncation error,
so the probe amplitude only has to keep the probe state positive.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from config import (
    DEGENERACY_GAP,
    DERIVATIVE_STEP,
    DERIVATIVE_STEP_RANGE,
    PROBE_EPSILON_FLOOR,
    SINGULAR_REL,
)
from src.utils.dynamics_utils import Hamiltonian, check_observable, heisenberg
from src.utils.linalg_utils import (
    DimensionMismatchError,
    SingularMatrixError,
    cond2,
    det_and_cofactors,
    herm_eig,
    kron,
    solve,
)
from src.utils.state_utils import (
    CoherenceVector,
    DensityMatrix,
    InvalidStateError,
    NotPositiveError,
    density_from_coherence,
)

logger = logging.getLogger(__name__)


class DegenerateSpectrumError(ValueError):
    """Raised when a spectral observable has (nearly) repeated eigenvalues."""


@dataclass(frozen=True, eq=False)
class ObservablePair:
    o_s: np.ndarray
    o_a: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "o_s", check_observable(self.o_s))
        object.__setattr__(self, "o_a", check_observable(self.o_a))


@dataclass(frozen=True, eq=False)
class TomographyMap:
    t: float
    omega: np.ndarray
    kvec: np.ndarray
    meta: Dict[str, object] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.kvec.shape[0])

    def predict(self, r: np.ndarray) -> np.ndarray:
        return self.omega @ np.asarray(r, dtype=float) + self.kvec


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    rho0: CoherenceVector
    residual: float
    condition: float
    delta: float
    valid: bool
    validity_error: Optional[str] = None


def qubit_observable_rows(pair: ObservablePair) -> List[np.ndarray]:
    """[O_S (x) 1, 1 (x) O_A, O_S (x) O_A], three mutually commuting observables."""
    if pair.o_s.shape != (2, 2) or pair.o_a.shape != (2, 2):
        raise DimensionMismatchError("qubit rows need 2 x 2 observables")
    eye = np.eye(2, dtype=complex)
    return [kron(pair.o_s, eye), kron(eye, pair.o_a), kron(pair.o_s, pair.o_a)]


def spectral_projectors(o: np.ndarray, gap: float = DEGENERACY_GAP) -> List[np.ndarray]:
    """Rank-one projectors of a nondegenerate observable, eigenvalues ascending."""
    eig = herm_eig(check_observable(o))
    gaps = np.diff(eig.eigenvalues)
    if gaps.size and float(gaps.min()) <= gap:
        raise DegenerateSpectrumError(
            f"observable spectrum {np.round(eig.eigenvalues, 12).tolist()} has a gap "
            f"of {gaps.min():.3e} <= {gap:.0e}"
        )
    vecs = eig.eigenvectors
    return [np.outer(vecs[:, i], vecs[:, i].conj()) for i in range(vecs.shape[1])]


def ndim_probability_components(o_s: np.ndarray, o_a: np.ndarray) -> List[np.ndarray]:
    """
    N^2 - 1 outcome-probability operators for a pair of N-level observables.

    Order: s_i (x) 1 for i < N, then 1 (x) a_j for j >= 2, then s_i (x) a_j for
    i, j >= 2 (1-based). s_N (x) 1 is left out since the s_i sum to the identity.
    """
    if o_s.shape != o_a.shape:
        raise DimensionMismatchError(
            f"system and ancilla observables differ in shape: {o_s.shape} vs {o_a.shape}"
        )
    s_proj = spectral_projectors(o_s)
    a_proj = spectral_projectors(o_a)
    n = len(s_proj)
    eye = np.eye(n, dtype=complex)

    comps = [kron(s_proj[i], eye) for i in range(n - 1)]
    comps += [kron(eye, a_proj[j]) for j in range(1, n)]
    comps += [kron(s_proj[i], a_proj[j]) for i in range(1, n) for j in range(1, n)]
    return comps


def _responses(
    ancilla: DensityMatrix, evolved: Sequence[np.ndarray], rho_s: DensityMatrix
) -> np.ndarray:
    total = kron(rho_s.mat, ancilla.mat)
    return np.array([np.trace(total @ o).real for o in evolved])


@lru_cache(maxsize=32)
def _probe_states(n: int, epsilon: Optional[float]) -> tuple[float, tuple[DensityMatrix, ...]]:
    size = n * n - 1
    eps = 0.5 / n if epsilon is None else float(epsilon)
    while True:
        try:
            probes = []
            for a in range(size):
                comps = np.zeros(size)
                comps[a] = eps
                probes.append(density_from_coherence(CoherenceVector(dim=n, components=comps)))
            return eps, tuple(probes)
        except NotPositiveError:
            if epsilon is not None or eps / 2 < PROBE_EPSILON_FLOOR:
                raise
            eps /= 2
            logger.debug(f"Probe amplitude reduced to {eps:.3e} for dimension {n}")


def build_map(
    h: Hamiltonian,
    ancilla: DensityMatrix,
    comps: Sequence[np.ndarray],
    t: float,
    epsilon: Optional[float] = None,
) -> TomographyMap:
    n = ancilla.dim
    size = n * n - 1
    if len(comps) != size:
        raise DimensionMismatchError(f"need {size} measured components, got {len(comps)}")
    if h.dim != n * n:
        raise DimensionMismatchError(
            f"Hamiltonian dimension {h.dim} does not match a {n} x {n} bipartition"
        )

    evolved = heisenberg(comps, h, t)
    center = density_from_coherence(CoherenceVector(dim=n, components=np.zeros(size)))
    kvec = _responses(ancilla, evolved, center)

    eps, probes = _probe_states(n, epsilon)
    omega = np.empty((size, size))
    for a, probe in enumerate(probes):
        omega[:, a] = (_responses(ancilla, evolved, probe) - kvec) / eps

    return TomographyMap(t=float(t), omega=omega, kvec=kvec, meta={"epsilon": eps, "dim": n})


def determinant(tmap: TomographyMap) -> float:
    return det_and_cofactors(tmap.omega)[0]


def _check_step(step: float) -> None:
    low, high = DERIVATIVE_STEP_RANGE
    if not low <= step <= high:
        raise ValueError(f"derivative step {step:g} outside [{low:g}, {high:g}]")


def map_derivative(
    h: Hamiltonian,
    ancilla: DensityMatrix,
    comps: Sequence[np.ndarray],
    t: float,
    step: float = DERIVATIVE_STEP,
) -> np.ndarray:
    """Central difference [Omega(t + step) - Omega(t - step)] / (2 step)."""
    _check_step(step)
    forward = build_map(h, ancilla, comps, t + step).omega
    backward = build_map(h, ancilla, comps, t - step).omega
    return (forward - backward) / (2.0 * step)


def ddet_dt(
    h: Hamiltonian,
    ancilla: DensityMatrix,
    comps: Sequence[np.ndarray],
    t: float,
    step: float = DERIVATIVE_STEP,
    tmap: Optional[TomographyMap] = None,
) -> float:
    """Jacobi's formula: sum_ij cof(Omega)_ij * dOmega_ij/dt."""
    current = tmap if tmap is not None else build_map(h, ancilla, comps, t)
    _, cof = det_and_cofactors(current.omega)
    return float(np.sum(cof * map_derivative(h, ancilla, comps, t, step)))


def ddet_dt_central(
    h: Hamiltonian,
    ancilla: DensityMatrix,
    comps: Sequence[np.ndarray],
    t: float,
    step: float = DERIVATIVE_STEP,
) -> float:
    """Plain central difference of the determinant, for cross-checking."""
    _check_step(step)
    forward = determinant(build_map(h, ancilla, comps, t + step))
    backward = determinant(build_map(h, ancilla, comps, t - step))
    return (forward - backward) / (2.0 * step)


def reconstruct(
    tmap: TomographyMap, p: Sequence[float], singular_rel: float = SINGULAR_REL
) -> ReconstructionResult:
    measured = np.asarray(p, dtype=float)
    if measured.shape != (tmap.size,):
        raise DimensionMismatchError(
            f"expected {tmap.size} measured values, got shape {measured.shape}"
        )
    delta = determinant(tmap)
    scale = float(np.linalg.norm(tmap.omega))
    if abs(delta) < singular_rel * scale or scale == 0.0:
        raise SingularMatrixError(
            f"map at t={tmap.t:.12g} is not invertible: |det| = {abs(delta):.3e}, "
            f"||Omega||_F = {scale:.3e}"
        )

    r = solve(tmap.omega, measured - tmap.kvec)
    residual = float(np.linalg.norm(tmap.predict(r) - measured))
    n = int(tmap.meta.get("dim", round(np.sqrt(tmap.size + 1))))
    recovered = CoherenceVector(dim=n, components=r)

    valid, problem = True, None
    try:
        density_from_coherence(recovered)
    except InvalidStateError as exc:
        valid, problem = False, str(exc)
        logger.warning(f"Reconstructed state at t={tmap.t:.6g} is not physical: {exc}")

    return ReconstructionResult(
        rho0=recovered,
        residual=residual,
        condition=cond2(tmap.omega),
        delta=delta,
        valid=valid,
        validity_error=problem,
    )


__all__ = [
    "DegenerateSpectrumError",
    "ObservablePair",
    "ReconstructionResult",
    "TomographyMap",
    "build_map",
    "ddet_dt",
    "ddet_dt_central",
    "determinant",
    "map_derivative",
    "ndim_probability_components",
    "qubit_observable_rows",
    "reconstruct",
    "spectral_projectors",
]
