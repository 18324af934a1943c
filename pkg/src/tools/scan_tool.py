"""
Time scan of a scenario: one ScanRecord per grid point with the reduced-state
entropy, entanglement of formation, det Omega, its time derivative and the
condition number of the map.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import List, Union

from config import MAX_CONCURRENCY
from src.state.types import ScanRecord, ScenarioConfig
from src.utils.entanglement_utils import entanglement_report
from src.utils.linalg_utils import cond2
from src.utils.scenario_utils import ScenarioRuntime, as_runtime
from src.utils.telemetry import timed_event
from src.utils.tomography_utils import build_map, ddet_dt, determinant

logger = logging.getLogger(__name__)


def evaluate_point(runtime: ScenarioRuntime, t: float) -> ScanRecord:
    """Evolve the scenario to time t and measure everything a scan records."""
    t = float(t)
    n = runtime.dim
    measures = entanglement_report(runtime.state_at(t), n, n, t)

    tmap = build_map(runtime.hamiltonian, runtime.ancilla, runtime.components, t)
    delta = determinant(tmap)
    ddelta = ddet_dt(
        runtime.hamiltonian,
        runtime.ancilla,
        runtime.components,
        t,
        step=runtime.tolerances["derivative_step"],
        tmap=tmap,
    )
    condition = cond2(tmap.omega)

    return ScanRecord(
        t=t,
        entropy=measures.entropy,
        eof=measures.eof,
        delta=delta,
        ddelta=ddelta,
        cond=condition if math.isfinite(condition) else None,
    )


def scan(
    source: Union[ScenarioConfig, ScenarioRuntime], max_workers: int = MAX_CONCURRENCY
) -> List[ScanRecord]:
    """
    Evaluate every grid point of the scenario.

    Points are independent and run on a thread pool; results come back in grid
    order, so the output does not depend on scheduling.
    """
    runtime = as_runtime(source)
    points = runtime.tgrid.points()
    # the eigendecomposition is cached on first use; do it before the workers start
    runtime.hamiltonian.eigen

    logger.info(
        f"Scanning '{runtime.name}' over [{runtime.tgrid.t_min:g}, {runtime.tgrid.t_max:g}] "
        f"with {len(points)} points"
    )
    with timed_event("scan", {"scenario": runtime.name, "points": len(points)}) as extra:
        with ThreadPoolExecutor(max_workers=max(1, max_workers)) as executor:
            records = list(executor.map(partial(evaluate_point, runtime), points))
        extra["max_abs_delta"] = max(r.abs_delta for r in records)

    if runtime.overrides:
        logger.warning(f"Tolerance overrides in effect: {runtime.overrides}")
    return records


__all__ = ["evaluate_point", "scan"]
