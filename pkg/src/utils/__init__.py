"""
Utility functions for the ancilla tomography toolkit
"""

from .file_utils import load_json_file, save_json_file
from .linalg_utils import (
    DimensionMismatchError,
    NotHermitianError,
    SingularMatrixError,
)
from .state_utils import (
    CoherenceVector,
    DensityMatrix,
    InvalidStateError,
    NotPositiveError,
)
from .scenario_utils import (
    ScenarioParseError,
    ScenarioRuntime,
    ScenarioValidationError,
    build_runtime,
    load_scenario,
)


__all__ = [
    "load_json_file",
    "save_json_file",
    "DimensionMismatchError",
    "NotHermitianError",
    "SingularMatrixError",
    "CoherenceVector",
    "DensityMatrix",
    "InvalidStateError",
    "NotPositiveError",
    "ScenarioParseError",
    "ScenarioRuntime",
    "ScenarioValidationError",
    "build_runtime",
    "load_scenario",
]
