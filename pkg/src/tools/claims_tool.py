"""
Claims checker.

Each check builds its own scenario (or uses the one given), measures the
quantities a claim is about and returns a ClaimVerdict with the numbers and the
limits they were held to:

- zero_theorem: at every entanglement zero of a pure start, det Omega and its
  time derivative vanish; and where |det Omega| is large the state is entangled.
  The derivative only has to vanish where Omega drops to rank one, as at a full
  recurrence; the builtin run checks fig1 and the recurrence scenario
- mixed_counterexample: with the {4, 2, 1, 0} Hamiltonian at t = pi/2 the
  entanglement of formation vanishes while |det Omega| = 9/512
- inverse_counterexample: an entangled pure state for which observables and an
  evolution exist that make det Omega and its derivative vanish
- mixed_breakdown: a mixed start reaches separable states with |det Omega| > 0;
  the builtin run uses the breakdown scenario and reports the fig2 minimum
"""

import logging
import math
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

import numpy as np

from config import (
    BREAKDOWN_DELTA_MIN,
    BREAKDOWN_EOF_TOL,
    CONTRAPOSITIVE_DELTA_MIN,
    CONTRAPOSITIVE_ENTROPY_MIN,
    COUNTEREXAMPLE_ANCILLA,
    COUNTEREXAMPLE_DELTA_TOL,
    COUNTEREXAMPLE_EOF_TOL,
    COUNTEREXAMPLE_O_A,
    COUNTEREXAMPLE_O_S,
    COUNTEREXAMPLE_PARAMETER_SETS,
    COUNTEREXAMPLE_TIME,
    DERIVATIVE_STEP,
    INVERSE_DDELTA_TOL,
    INVERSE_DELTA_TOL,
    INVERSE_OMEGAS,
    INVERSE_TIME,
)
from src.state.types import ClaimsReport, ClaimVerdict, ScanRecord
from src.tools.scan_tool import evaluate_point, scan
from src.tools.zeros_tool import find_entanglement_zeros
from src.utils.dynamics_utils import (
    expectation,
    hamiltonian_from_unitary,
    hamiltonian_spectrum_4210,
    qubit_observable,
)
from src.utils.entanglement_utils import (
    counterexample_observables,
    dominant_ket,
    eof,
    is_pure,
    schmidt,
    schmidt_embedding_unitary,
)
from src.utils.linalg_utils import kron
from src.utils.scenario_utils import (
    ScenarioRuntime,
    build_runtime,
    load_builtin_scenario,
    load_scenario,
)
from src.utils.state_utils import (
    CoherenceVector,
    ancilla_state,
    density_from_coherence,
    pure_state,
)
from src.utils.telemetry import record_event
from src.utils.tomography_utils import (
    ObservablePair,
    build_map,
    ddet_dt,
    determinant,
    qubit_observable_rows,
)

logger = logging.getLogger(__name__)

# |det Omega(pi/2)| for O_A = (0, O1, O2, 0): 3 |O1^2 - O2^2| / 128
COUNTEREXAMPLE_ABS_DELTA = 3.0 * abs(COUNTEREXAMPLE_O_A[1] ** 2 - COUNTEREXAMPLE_O_A[2] ** 2) / 128.0


def _verdict(
    claim: str,
    passed: bool,
    measured: Dict[str, object],
    thresholds: Dict[str, float],
    detail: str,
) -> ClaimVerdict:
    return ClaimVerdict(
        claim=claim,
        status="pass" if passed else "fail",
        measured=measured,
        thresholds=thresholds,
        detail=detail,
    )


def check_zero_theorem(
    runtime: ScenarioRuntime,
    records: Optional[List[ScanRecord]] = None,
    claim: str = "zero_theorem",
) -> ClaimVerdict:
    """Vanishing entanglement of a pure start forces det Omega = d/dt det Omega = 0."""
    tol = runtime.tolerances
    thresholds = {
        "delta": tol["theorem_delta_tol"],
        "ddelta": tol["theorem_ddelta_tol"],
        "contrapositive_delta_min": CONTRAPOSITIVE_DELTA_MIN,
        "contrapositive_entropy_min": CONTRAPOSITIVE_ENTROPY_MIN,
    }
    records = records if records is not None else scan(runtime)
    result = find_entanglement_zeros(runtime)

    if result.everywhere:
        zero_times = [r.t for r in records]
    else:
        zero_times = list(result.zeros)
    zero_times += [r.t for r in records if r.entropy is not None and r.entropy < 1e-12]
    zero_times = sorted(set(zero_times))

    at_zeros = [evaluate_point(runtime, t) for t in zero_times]
    worst_delta = max((p.abs_delta for p in at_zeros), default=0.0)
    worst_ddelta = max((abs(p.ddelta) for p in at_zeros), default=0.0)

    violations = [
        r.t
        for r in records
        if r.abs_delta > CONTRAPOSITIVE_DELTA_MIN
        and (r.entropy is None or r.entropy <= CONTRAPOSITIVE_ENTROPY_MIN)
    ]

    passed = (
        bool(zero_times)
        and worst_delta < thresholds["delta"]
        and worst_ddelta < thresholds["ddelta"]
        and not violations
    )
    measured = {
        "zeros": result.zeros,
        "everywhere": result.everywhere,
        "checked_times": len(zero_times),
        "max_abs_delta": worst_delta,
        "max_abs_ddelta": worst_ddelta,
        "contrapositive_violations": violations[:10],
    }
    if not zero_times:
        detail = "no entanglement zero found to test"
    elif violations:
        detail = f"{len(violations)} grid point(s) with large |det| but no entanglement"
    else:
        detail = f"checked {len(zero_times)} zero(s) of '{runtime.name}'"
    return _verdict(claim, passed, measured, thresholds, detail)


def counterexample_runtime(parameter_set: str) -> ScenarioRuntime:
    """Scenario of the pi/2 counterexample for parameter set 'i1' or 'i2'."""
    rho_s = density_from_coherence(
        CoherenceVector(dim=2, components=np.asarray(COUNTEREXAMPLE_PARAMETER_SETS[parameter_set]))
    )
    pair = ObservablePair(
        o_s=qubit_observable(COUNTEREXAMPLE_O_S), o_a=qubit_observable(COUNTEREXAMPLE_O_A)
    )
    return ScenarioRuntime(
        name=f"counterexample_{parameter_set}",
        hamiltonian=hamiltonian_spectrum_4210(),
        rho_s=rho_s,
        ancilla=ancilla_state(COUNTEREXAMPLE_ANCILLA),
        pair=pair,
        components=qubit_observable_rows(pair),
    )


def check_mixed_counterexample(parameter_set: str) -> ClaimVerdict:
    """Separable at pi/2, yet the map there is invertible."""
    runtime = counterexample_runtime(parameter_set)
    t = COUNTEREXAMPLE_TIME
    form = eof(runtime.state_at(t))
    delta = determinant(build_map(runtime.hamiltonian, runtime.ancilla, runtime.components, t))

    thresholds = {
        "eof": COUNTEREXAMPLE_EOF_TOL,
        "expected_abs_delta": COUNTEREXAMPLE_ABS_DELTA,
        "delta_tol": COUNTEREXAMPLE_DELTA_TOL,
    }
    gap = abs(abs(delta) - COUNTEREXAMPLE_ABS_DELTA)
    passed = form < COUNTEREXAMPLE_EOF_TOL and gap < COUNTEREXAMPLE_DELTA_TOL
    measured = {
        "t": t,
        "eof": form,
        "delta": delta,
        "delta_sign": int(math.copysign(1, delta)),
        "o_a": list(COUNTEREXAMPLE_O_A),
        "rho_s": list(COUNTEREXAMPLE_PARAMETER_SETS[parameter_set]),
    }
    detail = f"set {parameter_set}: E_F = {form:.3e}, |det| = {abs(delta):.12g}"
    return _verdict(f"mixed_counterexample_{parameter_set}", passed, measured, thresholds, detail)


def inverse_counterexample_runtime(psi: np.ndarray) -> ScenarioRuntime:
    """
    Evolution that carries |0>|0> to psi at INVERSE_TIME, with the Schmidt-basis
    observables of psi measured and both S and A starting in |0>.
    """
    pair = counterexample_observables(psi, *INVERSE_OMEGAS)
    u = schmidt_embedding_unitary(psi)
    up = CoherenceVector(dim=2, components=np.array([0.0, 0.0, 1.0]))
    return ScenarioRuntime(
        name="inverse_counterexample",
        hamiltonian=hamiltonian_from_unitary(u, INVERSE_TIME),
        rho_s=density_from_coherence(up),
        ancilla=ancilla_state((0.0, 0.0, 1.0)),
        pair=pair,
        components=qubit_observable_rows(pair),
    )


def check_inverse_counterexample(psi: np.ndarray) -> ClaimVerdict:
    """An entangled state at which det Omega and its derivative both vanish."""
    runtime = inverse_counterexample_runtime(psi)
    t = INVERSE_TIME
    lam_1 = float(schmidt(psi, 2, 2).coefficients[0])
    w1, w2 = INVERSE_OMEGAS

    fidelity = float(np.real(np.vdot(psi, runtime.state_at(t).mat @ psi)))

    eye = np.eye(2, dtype=complex)
    target = pure_state(psi)
    exp_s = expectation(target, kron(runtime.pair.o_s, eye))
    exp_a = expectation(target, kron(eye, runtime.pair.o_a))
    exp_sa = expectation(target, kron(runtime.pair.o_s, runtime.pair.o_a))
    expected_sa = 2.0 * math.sqrt(lam_1 * (1.0 - lam_1)) * w1 * w2

    tmap = build_map(runtime.hamiltonian, runtime.ancilla, runtime.components, t)
    delta = determinant(tmap)
    ddelta = ddet_dt(runtime.hamiltonian, runtime.ancilla, runtime.components, t, DERIVATIVE_STEP, tmap)

    thresholds = {"delta": INVERSE_DELTA_TOL, "ddelta": INVERSE_DDELTA_TOL, "expectation": 1e-12}
    passed = (
        abs(delta) < INVERSE_DELTA_TOL
        and abs(ddelta) < INVERSE_DDELTA_TOL
        and abs(exp_s) < 1e-12
        and abs(exp_a) < 1e-12
        and abs(exp_sa - expected_sa) < 1e-12
        and abs(fidelity - 1.0) < 1e-9
    )
    measured = {
        "schmidt_lambda_1": lam_1,
        "fidelity": fidelity,
        "exp_o_s": exp_s,
        "exp_o_a": exp_a,
        "exp_o_s_o_a": exp_sa,
        "expected_o_s_o_a": expected_sa,
        "delta": delta,
        "ddelta": ddelta,
    }
    detail = f"entangled state with lambda_1 = {lam_1:.6f}: |det| = {abs(delta):.3e}"
    return _verdict("inverse_counterexample", passed, measured, thresholds, detail)


def check_mixed_breakdown(runtime: ScenarioRuntime, records: Optional[List[ScanRecord]] = None) -> ClaimVerdict:
    """A mixed start reaches separable states at which the map is invertible."""
    records = records if records is not None else scan(runtime)
    hits = [
        r for r in records if r.eof is not None and r.eof < BREAKDOWN_EOF_TOL and r.abs_delta > BREAKDOWN_DELTA_MIN
    ]
    later = [r.eof for r in records if r.eof is not None and r.t > runtime.tgrid.t_min]
    thresholds = {"eof": BREAKDOWN_EOF_TOL, "delta_min": BREAKDOWN_DELTA_MIN}
    measured = {
        "points": len(hits),
        "min_eof": min(later, default=None),
        "first_t": hits[0].t if hits else None,
        "max_abs_delta": max((r.abs_delta for r in hits), default=0.0),
    }
    detail = (
        f"{len(hits)} separable grid point(s) with |det| > {BREAKDOWN_DELTA_MIN:g}"
        if hits
        else "no separable grid point with a large determinant"
    )
    return _verdict("mixed_breakdown", bool(hits), measured, thresholds, detail)


def _skipped(claim: str, detail: str) -> ClaimVerdict:
    return ClaimVerdict(claim=claim, status="skipped", detail=detail)


def _run_check(claim: str, check: Callable[[], ClaimVerdict]) -> ClaimVerdict:
    try:
        return check()
    except Exception as exc:
        logger.error(f"Claim {claim} could not be evaluated: {exc}")
        return ClaimVerdict(claim=claim, status="fail", detail=f"{type(exc).__name__}: {exc}")


def inverse_target(
    runtime: Optional[ScenarioRuntime] = None, records: Optional[List[ScanRecord]] = None
) -> np.ndarray:
    """Most entangled grid state of the pure builtin scenario."""
    if runtime is None:
        runtime = build_runtime(load_builtin_scenario("fig1"))
        records = None
    records = records if records is not None else scan(runtime)
    best = max(records, key=lambda r: r.entropy or 0.0)
    return dominant_ket(runtime.state_at(best.t))


def check_builtin_breakdown() -> ClaimVerdict:
    """
    Breakdown on the 'breakdown' scenario, with the fig2 scan measured next to
    it. The fig2 state never becomes separable on its grid; its smallest
    entanglement of formation is reported rather than held to a limit.
    """
    verdict = check_mixed_breakdown(build_runtime(load_builtin_scenario("breakdown")))
    reference = check_mixed_breakdown(build_runtime(load_builtin_scenario("fig2")))
    verdict.measured["fig2_points"] = reference.measured["points"]
    verdict.measured["fig2_min_eof"] = reference.measured["min_eof"]
    if not reference.measured["points"]:
        verdict.detail += f"; fig2 stays entangled (min E_F {reference.measured['min_eof']:.3e})"
    return verdict


def check_claims(scenario: Union[str, Path] = "builtin") -> ClaimsReport:
    """
    Evaluate every claim. With 'builtin' the pure-start theorem runs on fig1
    and on the recurrence scenario, and the breakdown on the breakdown
    scenario; with a scenario path the one that fits the initial state runs
    and the other is skipped.
    """
    verdicts: List[ClaimVerdict] = []
    label = str(scenario)
    pure_rt = build_runtime(load_builtin_scenario("fig1"))
    pure_records = scan(pure_rt)

    if label == "builtin":
        recurrence_rt = build_runtime(load_builtin_scenario("recurrence"))
        verdicts.append(_run_check("zero_theorem", lambda: check_zero_theorem(pure_rt, pure_records)))
        verdicts.append(
            _run_check(
                "zero_theorem_recurrence",
                lambda: check_zero_theorem(recurrence_rt, claim="zero_theorem_recurrence"),
            )
        )
        verdicts.append(_run_check("mixed_breakdown", check_builtin_breakdown))
    else:
        runtime = build_runtime(load_scenario(scenario))
        if is_pure(runtime.initial_state):
            verdicts.append(_run_check("zero_theorem", lambda: check_zero_theorem(runtime)))
            verdicts.append(_skipped("mixed_breakdown", "initial state is pure"))
        else:
            verdicts.append(_skipped("zero_theorem", "initial state is mixed"))
            verdicts.append(_run_check("mixed_breakdown", lambda: check_mixed_breakdown(runtime)))

    for name in COUNTEREXAMPLE_PARAMETER_SETS:
        verdicts.append(
            _run_check(f"mixed_counterexample_{name}", lambda name=name: check_mixed_counterexample(name))
        )
    verdicts.append(
        _run_check(
            "inverse_counterexample",
            lambda: check_inverse_counterexample(inverse_target(pure_rt, pure_records)),
        )
    )

    report = ClaimsReport(scenario=label, verdicts=verdicts)
    record_event(
        "claims",
        {"scenario": label, "statuses": {v.claim: v.status for v in verdicts}},
    )
    for verdict in report.failures:
        logger.warning(f"Claim {verdict.claim} failed: {verdict.detail} {verdict.measured}")
    return report


__all__ = [
    "COUNTEREXAMPLE_ABS_DELTA",
    "check_builtin_breakdown",
    "check_claims",
    "check_inverse_counterexample",
    "check_mixed_breakdown",
    "check_mixed_counterexample",
    "check_zero_theorem",
    "counterexample_runtime",
    "inverse_counterexample_runtime",
    "inverse_target",
]
