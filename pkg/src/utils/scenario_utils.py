"""
Scenario loading and the runtime objects (Hamiltonian, states, measured
components) a scenario resolves to.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import ValidationError

from config import SCENARIO_DIR, TOLERANCE_DEFAULTS
from src.state.types import (
    HamiltonianKind,
    HamiltonianSpec,
    ObservableSpec,
    ScenarioConfig,
    TimeGrid,
)
from src.utils.dynamics_utils import (
    Hamiltonian,
    evolve,
    hamiltonian_from_payload,
    hamiltonian_interaction,
    hamiltonian_spectrum_4210,
    integer_spectrum_hamiltonian,
    qubit_observable,
    spectral_observable,
    zero_hamiltonian,
)
from src.utils.file_utils import load_json_file
from src.utils.linalg_utils import DimensionMismatchError, NotHermitianError
from src.utils.state_utils import (
    CoherenceVector,
    DensityMatrix,
    InvalidStateError,
    ancilla_state,
    density_from_coherence,
    product_state,
    random_unitary,
)
from src.utils.tomography_utils import (
    DegenerateSpectrumError,
    ObservablePair,
    ndim_probability_components,
    qubit_observable_rows,
)

logger = logging.getLogger(__name__)


class ScenarioParseError(ValueError):
    """Raised when a scenario file is not well-formed JSON."""


class ScenarioValidationError(ValueError):
    """Raised when a scenario parses but violates a field or state invariant."""


@dataclass(eq=False)
class ScenarioRuntime:
    """Everything a scan, zero search or reconstruction needs, already validated."""

    name: str
    hamiltonian: Hamiltonian
    rho_s: DensityMatrix
    ancilla: DensityMatrix
    pair: ObservablePair
    components: List[np.ndarray]
    tgrid: TimeGrid = field(default_factory=TimeGrid)
    tolerances: Dict[str, float] = field(default_factory=lambda: dict(TOLERANCE_DEFAULTS))
    overrides: Dict[str, float] = field(default_factory=dict)
    protocol: str = "expectation"

    @property
    def dim(self) -> int:
        return self.ancilla.dim

    @property
    def initial_state(self) -> DensityMatrix:
        return product_state(self.rho_s, self.ancilla)

    def state_at(self, t: float) -> DensityMatrix:
        return evolve(self.initial_state, self.hamiltonian, t)


def build_hamiltonian(
    spec: HamiltonianSpec, total_dim: int, base_dir: Optional[Path] = None, seed: int = 0
) -> Hamiltonian:
    """Resolve a Hamiltonian spec; 'seed' is used when a seeded kind sets none of its own."""
    if spec.kind == HamiltonianKind.SPECTRUM_4210:
        h = hamiltonian_spectrum_4210()
    elif spec.kind == HamiltonianKind.INTERACTION:
        h = hamiltonian_interaction() if spec.phi is None else hamiltonian_interaction(spec.phi)
    elif spec.kind == HamiltonianKind.ZERO:
        h = zero_hamiltonian(spec.dim or total_dim)
    elif spec.kind == HamiltonianKind.INTEGER_SPECTRUM:
        h = integer_spectrum_hamiltonian(
            spec.dim, seed if spec.seed is None else spec.seed, spec.max_level
        )
    else:
        path = Path(spec.path)
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        logger.info(f"Loading Hamiltonian from {path}")
        try:
            payload = load_json_file(path)
        except json.JSONDecodeError as exc:
            raise ScenarioParseError(
                f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
        try:
            h = hamiltonian_from_payload(payload)
        except KeyError as exc:
            raise ScenarioValidationError(f"{path}: Hamiltonian file is missing field {exc}") from exc
        except TypeError as exc:
            raise ScenarioValidationError(
                f"{path}: Hamiltonian file must be an object with dim, entries_re, entries_im ({exc})"
            ) from exc

    if h.dim != total_dim:
        raise DimensionMismatchError(
            f"Hamiltonian has dimension {h.dim}, the scenario needs {total_dim}"
        )
    return h


def build_observable(spec: ObservableSpec, dim: int) -> np.ndarray:
    if spec.coefficients is not None:
        if dim != 2:
            raise DimensionMismatchError("coefficient observables are defined for qubits only")
        return qubit_observable(spec.coefficients)
    if len(spec.eigenvalues) != dim:
        raise DimensionMismatchError(
            f"spectral observable has {len(spec.eigenvalues)} eigenvalues, dimension is {dim}"
        )
    basis = None if spec.basis_seed is None else random_unitary(dim, spec.basis_seed)
    return spectral_observable(spec.eigenvalues, basis)


def build_runtime(cfg: ScenarioConfig, base_dir: Optional[Path] = None) -> ScenarioRuntime:
    n = cfg.dim
    rho_s = density_from_coherence(CoherenceVector(dim=n, components=np.asarray(cfg.rho_s)))
    if n == 2:
        ancilla = ancilla_state(cfg.ancilla)
    else:
        ancilla = density_from_coherence(CoherenceVector(dim=n, components=np.asarray(cfg.ancilla)))

    pair = ObservablePair(
        o_s=build_observable(cfg.observables.system, n),
        o_a=build_observable(cfg.observables.ancilla, n),
    )
    protocol = cfg.resolved_protocol
    if protocol == "expectation":
        components = qubit_observable_rows(pair)
    else:
        components = ndim_probability_components(pair.o_s, pair.o_a)

    return ScenarioRuntime(
        name=cfg.name,
        hamiltonian=build_hamiltonian(cfg.hamiltonian, n * n, base_dir, cfg.seed),
        rho_s=rho_s,
        ancilla=ancilla,
        pair=pair,
        components=components,
        tgrid=cfg.tgrid,
        tolerances=cfg.tolerances.resolved(),
        overrides=cfg.tolerances.overrides(),
        protocol=protocol,
    )


def _format_validation_error(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(item) for item in err.get("loc", ())) or "<root>"
        parts.append(f"{loc}: {err.get('msg')}")
    return "; ".join(parts)


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """
    Parse and validate a scenario file.

    Raises ScenarioParseError for malformed JSON, ScenarioValidationError for
    schema or state violations and OSError when the file cannot be read.
    """
    file_path = Path(path)
    text = file_path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(
            f"{file_path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc

    try:
        cfg = ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        raise ScenarioValidationError(f"{file_path}: {_format_validation_error(exc)}") from exc

    if cfg.hamiltonian.kind == HamiltonianKind.FILE:
        ham_path = Path(cfg.hamiltonian.path)
        if not ham_path.is_absolute():
            ham_path = (file_path.parent / ham_path).resolve()
            cfg = cfg.model_copy(
                update={"hamiltonian": cfg.hamiltonian.model_copy(update={"path": str(ham_path)})}
            )

    try:
        build_runtime(cfg)
    except (InvalidStateError, NotHermitianError, DimensionMismatchError, DegenerateSpectrumError) as exc:
        raise ScenarioValidationError(f"{file_path}: {exc}") from exc

    logger.info(f"Loaded scenario '{cfg.name}' from {file_path}")
    return cfg


def builtin_scenario_path(name: str) -> Path:
    return SCENARIO_DIR / f"{name}.json"


def load_builtin_scenario(name: str) -> ScenarioConfig:
    return load_scenario(builtin_scenario_path(name))


def as_runtime(source: Union[ScenarioConfig, ScenarioRuntime]) -> ScenarioRuntime:
    if isinstance(source, ScenarioRuntime):
        return source
    return build_runtime(source)


__all__ = [
    "ScenarioParseError",
    "ScenarioRuntime",
    "ScenarioValidationError",
    "as_runtime",
    "build_hamiltonian",
    "build_observable",
    "build_runtime",
    "builtin_scenario_path",
    "load_builtin_scenario",
    "load_scenario",
]
