"""
Location of entanglement zeros: instants at which an initially pure product
state of S + A returns to a product state.
"""

import logging
import math
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from config import ZERO_DEDUP_TOL
from src.state.types import ScenarioConfig, ZeroSearchResult
from src.utils.entanglement_utils import NotPureError, entropy_pure, is_pure, purity_deficit
from src.utils.scenario_utils import ScenarioRuntime, as_runtime
from src.utils.telemetry import timed_event

logger = logging.getLogger(__name__)


def _search_grid(runtime: ScenarioRuntime, interval: Tuple[float, float]) -> np.ndarray:
    a, b = interval
    steps = max(2, int(math.ceil((b - a) / runtime.tgrid.resolution - 1e-9)) + 1)
    return np.linspace(a, b, steps)


def _vertex_deficit(times: np.ndarray, deficits: np.ndarray, i: int) -> float:
    """Minimum of the parabola through the deficits around grid index i."""
    if i == 0 or i == len(times) - 1:
        return float(deficits[i])
    x, y = times[i - 1 : i + 2], deficits[i - 1 : i + 2]
    curvature, slope, offset = np.polyfit(x - x[1], y, 2)
    if curvature <= 0.0:
        return float(deficits[i])
    return float(max(0.0, offset - slope * slope / (4.0 * curvature)))


def _local_minima(values: np.ndarray) -> List[int]:
    minima = []
    last = len(values) - 1
    for i, value in enumerate(values):
        left = values[i - 1] if i > 0 else math.inf
        right = values[i + 1] if i < last else math.inf
        if value <= left and value <= right:
            minima.append(i)
    return minima


def _dedup(times: List[float], tol: float = ZERO_DEDUP_TOL) -> List[float]:
    unique: List[float] = []
    for t in sorted(times):
        if not unique or t - unique[-1] > tol:
            unique.append(t)
    return unique


def find_entanglement_zeros(
    source: Union[ScenarioConfig, ScenarioRuntime],
    interval: Optional[Tuple[float, float]] = None,
) -> ZeroSearchResult:
    """
    Scan at the scenario resolution, then refine every promising grid minimum.

    A grid minimum is refined when its entropy, or the vertex of the parabola
    through the neighbouring purity deficits, is below zero_pre_threshold.
    A grid point already below zero_post_threshold is kept as it is. Otherwise
    refinement minimizes the purity deficit 1 - tr(rho_S^2) on the bracketing
    grid cells to zero_time_tol; a refined point is a zero when its entropy
    is below zero_post_threshold.
    """
    runtime = as_runtime(source)
    if not is_pure(runtime.initial_state):
        raise NotPureError(
            f"scenario '{runtime.name}' starts mixed (purity "
            f"{runtime.initial_state.purity:.12g}); entanglement zeros need a pure start"
        )

    a, b = interval if interval is not None else (runtime.tgrid.t_min, runtime.tgrid.t_max)
    if not a < b:
        raise ValueError(f"zero search interval needs a < b, got [{a}, {b}]")

    tol = runtime.tolerances
    n = runtime.dim

    def entropy_at(t: float) -> float:
        return entropy_pure(runtime.state_at(t), n, n)

    def deficit_at(t: float) -> float:
        return purity_deficit(runtime.state_at(t), n, n)

    with timed_event("zeros", {"scenario": runtime.name, "interval": [a, b]}) as extra:
        times = _search_grid(runtime, (a, b))
        entropies = np.array([entropy_at(t) for t in times])

        if np.all(entropies < tol["zero_post_threshold"]):
            logger.info(f"Entanglement vanishes at all {len(times)} grid points")
            extra["everywhere"] = True
            return ZeroSearchResult(interval=(a, b), everywhere=True, candidates=0)

        deficits = np.array([deficit_at(t) for t in times])
        found: List[float] = []
        candidates = 0
        for i in _local_minima(entropies):
            if (
                entropies[i] >= tol["zero_pre_threshold"]
                and _vertex_deficit(times, deficits, i) >= tol["zero_pre_threshold"]
            ):
                continue
            candidates += 1
            if entropies[i] < tol["zero_post_threshold"]:
                found.append(float(times[i]))
                continue
            lo = times[max(i - 1, 0)]
            hi = times[min(i + 1, len(times) - 1)]
            res = minimize_scalar(
                deficit_at,
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": tol["zero_time_tol"]},
            )
            refined = float(res.x)
            if entropy_at(refined) < tol["zero_post_threshold"]:
                found.append(refined)
            else:
                logger.debug(f"Minimum near t={times[i]:.6g} is shallow, not a zero")

        zeros = _dedup(found)
        extra["zeros"] = len(zeros)
        extra["candidates"] = candidates

    logger.info(f"Found {len(zeros)} entanglement zero(s) in [{a:g}, {b:g}]")
    return ZeroSearchResult(interval=(a, b), zeros=zeros, everywhere=False, candidates=candidates)


__all__ = ["find_entanglement_zeros"]
