import logging
import math
from typing import Union

import numpy as np

from src.state.types import ReconstructionReport, ScenarioConfig
from src.utils.dynamics_utils import expectation
from src.utils.scenario_utils import ScenarioRuntime, as_runtime
from src.utils.state_utils import coherence_from_density
from src.utils.telemetry import timed_event
from src.utils.tomography_utils import build_map, reconstruct

logger = logging.getLogger(__name__)


def simulate_measurement(runtime: ScenarioRuntime, t: float) -> np.ndarray:
    """Exact expectation values of the measured components at time t."""
    rho_t = runtime.state_at(t)
    return np.array([expectation(rho_t, c) for c in runtime.components])


def run_reconstruction(source: Union[ScenarioConfig, ScenarioRuntime], t: float) -> ReconstructionReport:
    """
    Simulate p(t) from the scenario's system state, then recover that state from
    p(t) alone. SingularMatrixError propagates when the map is not invertible.
    """
    runtime = as_runtime(source)
    t = float(t)
    truth = coherence_from_density(runtime.rho_s).components

    with timed_event("reconstruct", {"scenario": runtime.name, "t": t}) as extra:
        measured = simulate_measurement(runtime, t)
        tmap = build_map(runtime.hamiltonian, runtime.ancilla, runtime.components, t)
        result = reconstruct(tmap, measured, runtime.tolerances["singular_rel"])
        error = float(np.linalg.norm(result.rho0.components - truth))
        extra["error"] = error
        extra["condition"] = result.condition

    logger.info(
        f"Reconstructed '{runtime.name}' at t={t:g}: error {error:.3e}, "
        f"residual {result.residual:.3e}, cond {result.condition:.3e}"
    )
    return ReconstructionReport(
        scenario=runtime.name,
        t=t,
        measured=measured.tolist(),
        truth=truth.tolist(),
        recovered=result.rho0.components.tolist(),
        residual=result.residual,
        condition=result.condition if math.isfinite(result.condition) else None,
        delta=result.delta,
        error=error,
        valid=result.valid,
        validity_error=result.validity_error,
    )


__all__ = ["run_reconstruction", "simulate_measurement"]
