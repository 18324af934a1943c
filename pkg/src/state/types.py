import math
from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import DEFAULT_TGRID, TOLERANCE_DEFAULTS


class HamiltonianKind(str, Enum):
    """Supported Hamiltonian sources"""

    SPECTRUM_4210 = "spectrum_4210"
    INTERACTION = "interaction"
    FILE = "file"
    ZERO = "zero"
    INTEGER_SPECTRUM = "integer_spectrum"


class HamiltonianSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: HamiltonianKind = Field(..., description="Builtin name or 'file'")
    phi: Optional[float] = Field(
        None, description="Mixing angle for 'interaction'; default has cos(2 phi)=1/sqrt(3)"
    )
    path: Optional[str] = Field(
        None, description="JSON file with dim, entries_re, entries_im (kind 'file')"
    )
    dim: Optional[int] = Field(
        None, description="Total Hilbert dimension for 'zero' and 'integer_spectrum'"
    )
    seed: Optional[int] = Field(
        None, description="Seed for 'integer_spectrum'; the scenario seed when absent"
    )
    max_level: int = Field(5, ge=0, description="Largest integer energy for 'integer_spectrum'")

    @model_validator(mode="after")
    def _check_kind_fields(self) -> "HamiltonianSpec":
        if self.kind == HamiltonianKind.FILE and not self.path:
            raise ValueError("hamiltonian of kind 'file' needs a path")
        if self.kind == HamiltonianKind.INTEGER_SPECTRUM and self.dim is None:
            raise ValueError("hamiltonian of kind 'integer_spectrum' needs dim")
        return self


class ObservableSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coefficients: Optional[List[float]] = Field(
        None, description="Qubit form (O0, O1, O2, O3) = O0*1 + O1 X + O2 Y + O3 Z"
    )
    eigenvalues: Optional[List[float]] = Field(
        None, description="Spectral form; eigenbasis is computational or seeded random"
    )
    basis_seed: Optional[int] = Field(
        None, description="Seed of a random eigenbasis for the spectral form"
    )

    @model_validator(mode="after")
    def _check_form(self) -> "ObservableSpec":
        if (self.coefficients is None) == (self.eigenvalues is None):
            raise ValueError("observable needs exactly one of 'coefficients' or 'eigenvalues'")
        if self.coefficients is not None and len(self.coefficients) != 4:
            raise ValueError("qubit observable coefficients must have 4 entries")
        return self


class ObservablesSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    system: ObservableSpec = Field(..., description="Observable measured on S")
    ancilla: ObservableSpec = Field(..., description="Observable measured on A")


class TimeGrid(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t_min: float = Field(DEFAULT_TGRID["t_min"], description="First grid time")
    t_max: float = Field(DEFAULT_TGRID["t_max"], description="Last grid time")
    steps: int = Field(DEFAULT_TGRID["steps"], description="Number of grid points")

    @model_validator(mode="after")
    def _check_grid(self) -> "TimeGrid":
        if self.steps < 2:
            raise ValueError(f"tgrid.steps must be at least 2, got {self.steps}")
        if not self.t_min < self.t_max:
            raise ValueError(f"tgrid needs t_min < t_max, got {self.t_min} >= {self.t_max}")
        return self

    @property
    def resolution(self) -> float:
        return (self.t_max - self.t_min) / (self.steps - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.steps)


class ToleranceOverrides(BaseModel):
    model_config = ConfigDict(extra="forbid")

    derivative_step: Optional[float] = Field(None, ge=1e-7, le=1e-2)
    singular_rel: Optional[float] = Field(None, gt=0)
    zero_pre_threshold: Optional[float] = Field(None, gt=0)
    zero_post_threshold: Optional[float] = Field(None, gt=0)
    zero_time_tol: Optional[float] = Field(None, gt=0)
    theorem_delta_tol: Optional[float] = Field(None, gt=0)
    theorem_ddelta_tol: Optional[float] = Field(None, gt=0)

    def overrides(self) -> Dict[str, float]:
        return self.model_dump(exclude_none=True)

    def resolved(self) -> Dict[str, float]:
        return {**TOLERANCE_DEFAULTS, **self.overrides()}


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    name: str = Field("scenario", description="Label carried into outputs")
    hamiltonian: HamiltonianSpec = Field(..., description="Hamiltonian of S + A")
    rho_s: List[float] = Field(
        ..., alias="rhoS", description="Initial coherence vector of S; 'rho_s' is accepted too"
    )
    ancilla: List[float] = Field(..., description="Coherence (Bloch) vector of A")
    observables: ObservablesSpec = Field(..., description="Measured observables")
    protocol: Optional[Literal["expectation", "probability"]] = Field(
        None,
        description="'expectation' (qubit rows) or 'probability' (spectral outcomes); "
        "defaults to 'expectation' for qubits",
    )
    tgrid: TimeGrid = Field(default_factory=TimeGrid, description="Scan grid")
    seed: int = Field(
        0, description="Default seed of seeded Hamiltonians that do not set their own"
    )
    tolerances: ToleranceOverrides = Field(
        default_factory=ToleranceOverrides, description="Overrides of numeric thresholds"
    )

    @model_validator(mode="after")
    def _check_dimensions(self) -> "ScenarioConfig":
        n = math.isqrt(len(self.rho_s) + 1)
        if n < 2 or n * n != len(self.rho_s) + 1:
            raise ValueError(
                f"rho_s has {len(self.rho_s)} components; expected N^2 - 1 for some N >= 2"
            )
        if len(self.ancilla) != len(self.rho_s):
            raise ValueError(
                f"ancilla has {len(self.ancilla)} components, rho_s has {len(self.rho_s)}"
            )
        if self.resolved_protocol == "expectation":
            if n != 2:
                raise ValueError("the 'expectation' protocol is defined for qubits only")
            for side in ("system", "ancilla"):
                if getattr(self.observables, side).coefficients is None:
                    raise ValueError(f"observables.{side} needs 'coefficients' for qubit rows")
        return self

    @property
    def dim(self) -> int:
        return math.isqrt(len(self.rho_s) + 1)

    @property
    def resolved_protocol(self) -> str:
        if self.protocol is not None:
            return self.protocol
        return "expectation" if math.isqrt(len(self.rho_s) + 1) == 2 else "probability"


class ScanRecord(BaseModel):
    t: float = Field(..., description="Time (dimensionless)")
    entropy: Optional[float] = Field(None, description="Reduced-state entropy in bits (pure totals)")
    eof: Optional[float] = Field(None, description="Entanglement of formation in bits (2 x 2)")
    delta: float = Field(..., description="det Omega(t)")
    ddelta: float = Field(..., description="d det Omega / dt by the cofactor formula")
    cond: Optional[float] = Field(None, description="2-norm condition number; absent when infinite")

    @property
    def abs_delta(self) -> float:
        return abs(self.delta)


class ZeroSearchResult(BaseModel):
    interval: Tuple[float, float] = Field(..., description="Searched time interval")
    zeros: List[float] = Field(default_factory=list, description="Refined zero times")
    everywhere: bool = Field(
        False, description="True when entanglement vanishes at every grid point"
    )
    candidates: int = Field(0, description="Grid minima that were refined")


class ClaimVerdict(BaseModel):
    claim: str = Field(..., description="Claim identifier")
    status: Literal["pass", "fail", "skipped"] = Field(..., description="Outcome")
    measured: Dict[str, Any] = Field(default_factory=dict, description="Measured numbers")
    thresholds: Dict[str, float] = Field(default_factory=dict, description="Acceptance limits")
    detail: str = Field("", description="Human-readable explanation")


class ClaimsReport(BaseModel):
    scenario: str = Field(..., description="'builtin' or the scenario path")
    verdicts: List[ClaimVerdict] = Field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(v.status != "fail" for v in self.verdicts)

    @property
    def failures(self) -> List[ClaimVerdict]:
        return [v for v in self.verdicts if v.status == "fail"]


class ReconstructionReport(BaseModel):
    scenario: str = Field(..., description="Scenario name")
    t: float = Field(..., description="Measurement time")
    measured: List[float] = Field(..., description="Simulated measurement vector p(t)")
    truth: List[float] = Field(..., description="Coherence vector used to simulate p(t)")
    recovered: List[float] = Field(..., description="Coherence vector obtained by inversion")
    residual: float = Field(..., description="||Omega r + k - p||_2")
    condition: Optional[float] = Field(None, description="cond_2(Omega); absent when infinite")
    delta: float = Field(..., description="det Omega(t)")
    error: float = Field(..., description="||recovered - truth||_2")
    valid: bool = Field(..., description="Recovered vector is a physical state")
    validity_error: Optional[str] = Field(None, description="Why the state is not physical")
