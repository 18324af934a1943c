"""
Configuration constants for the ancilla tomography toolkit
Centralized tolerances, protocol defaults and builtin scenario parameters
"""

import math
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent
SCENARIO_DIR = PROJECT_ROOT / "scenarios"
LOGS_DIR = PROJECT_ROOT / "logs"
CLI_LOGS_DIR = LOGS_DIR / "cli_logs"

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"

# Matrix and state validation
HERMITIAN_TOL = 1e-12  # max-norm of a - a^dagger
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10  # smallest admissible eigenvalue of a density matrix
BLOCH_NORM_TOL = 1e-10
KET_NORM_TOL = 1e-10
PURITY_TOL = 1e-8  # |tr(rho^2) - 1| allowed for a "pure" total state
IMAG_RESIDUE_TOL = 1e-11  # imaginary part left over in tr(rho O)
SVD_TRUNCATION_REL = 1e-13  # singular values below this * s_max are zeroed
DEGENERACY_GAP = 1e-8  # minimum eigenvalue gap for spectral observables

# Entanglement
ENTROPY_EIG_FLOOR = 1e-14  # eigenvalues below this contribute 0 log 0
SCHMIDT_PRODUCT_TOL = 1e-10

# Tomography map
PROBE_EPSILON_FLOOR = 1e-3
SINGULAR_REL = 1e-12  # |det| < SINGULAR_REL * ||Omega||_F is not invertible
DERIVATIVE_STEP = 1e-5
DERIVATIVE_STEP_RANGE = (1e-7, 1e-2)
COND_INFINITY_FLOOR = 1e-300

# Entanglement-zero search
ZERO_PRE_THRESHOLD = 1e-6  # grid minima below this are refined
ZERO_POST_THRESHOLD = 1e-10  # refined minima below this are zeros
ZERO_TIME_TOL = 1e-9
ZERO_DEDUP_TOL = 1e-7

# Claim thresholds
THEOREM_DELTA_TOL = 1e-8
THEOREM_DDELTA_TOL = 1e-6
CONTRAPOSITIVE_DELTA_MIN = 1e-3
CONTRAPOSITIVE_ENTROPY_MIN = 1e-6
COUNTEREXAMPLE_EOF_TOL = 1e-10
COUNTEREXAMPLE_DELTA_TOL = 1e-9
INVERSE_DELTA_TOL = 1e-10
INVERSE_DDELTA_TOL = 1e-7
BREAKDOWN_EOF_TOL = 1e-10
BREAKDOWN_DELTA_MIN = 1e-3

# Names a scenario file may override under "tolerances"
TOLERANCE_DEFAULTS = {
    "derivative_step": DERIVATIVE_STEP,
    "singular_rel": SINGULAR_REL,
    "zero_pre_threshold": ZERO_PRE_THRESHOLD,
    "zero_post_threshold": ZERO_POST_THRESHOLD,
    "zero_time_tol": ZERO_TIME_TOL,
    "theorem_delta_tol": THEOREM_DELTA_TOL,
    "theorem_ddelta_tol": THEOREM_DDELTA_TOL,
}

# Default scan grid of the builtin scenarios
DEFAULT_TGRID = {"t_min": 0.0, "t_max": 20.0, "steps": 2001}

# Interaction Hamiltonian mixing angle: cos(2 phi) = 1/sqrt(3)
INTERACTION_COS_2PHI = 1.0 / math.sqrt(3.0)
INTERACTION_PHI = 0.5 * math.acos(INTERACTION_COS_2PHI)

# Mixed-state counterexample with the {4, 2, 1, 0} Hamiltonian
COUNTEREXAMPLE_TIME = math.pi / 2
COUNTEREXAMPLE_O_S = (0.0, 1.0, 1.0, 1.0)  # (O0, O1, O2, O3)
COUNTEREXAMPLE_O_A = (0.0, 1.0, 0.5, 0.0)  # |O1| > |O2|
COUNTEREXAMPLE_ANCILLA = (0.0, 0.25, 0.25)
COUNTEREXAMPLE_PARAMETER_SETS = {
    "i1": (1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0), 0.0),  # pure system state
    "i2": (1.0 / 3.0, 0.25, 0.5),  # mixed system state
}

# Inverse-implication construction
INVERSE_OMEGAS = (1.0, 1.0)  # (omega_1, omega_2)
INVERSE_TIME = 1.0  # instant at which the constructed evolution reaches the target ket

# Concurrency Settings
MAX_CONCURRENCY = 5  # maximum parallel grid-point workers

# CLI exit codes
EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_CLAIM_FAILED = 2
EXIT_SINGULAR = 3
EXIT_IO_ERROR = 4
