"""
Tests for the affine measurement map, its determinant and inversion
"""

import sys
import os
import math
from dataclasses import replace

import numpy as np
import pytest

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.tools.reconstruction_tool import simulate_measurement
from src.utils.dynamics_utils import (
    hamiltonian_interaction,
    hamiltonian_spectrum_4210,
    qubit_observable,
    spectral_observable,
)
from src.utils.linalg_utils import DimensionMismatchError, SingularMatrixError
from src.utils.scenario_utils import build_runtime, load_builtin_scenario
from src.utils.state_utils import (
    CoherenceVector,
    ancilla_state,
    coherence_from_density,
    density_from_coherence,
    random_state,
    random_unitary,
)
from src.utils.tomography_utils import (
    DegenerateSpectrumError,
    ObservablePair,
    build_map,
    ddet_dt,
    ddet_dt_central,
    determinant,
    map_derivative,
    ndim_probability_components,
    qubit_observable_rows,
    reconstruct,
    spectral_projectors,
)

pytestmark = pytest.mark.unit


@pytest.fixture(scope="module")
def fig1():
    return build_runtime(load_builtin_scenario("fig1"))


def _map(runtime, t, **kwargs):
    return build_map(runtime.hamiltonian, runtime.ancilla, runtime.components, t, **kwargs)


def test_map_predicts_measurements(fig1):
    t = 3.7
    tmap = _map(fig1, t)
    for seed in range(10):
        rho_s = random_state(2, pure=False, seed=seed)
        runtime = replace(fig1, rho_s=rho_s)
        r = coherence_from_density(rho_s).components
        assert np.allclose(tmap.predict(r), simulate_measurement(runtime, t), atol=1e-12)


def test_measurement_is_affine_in_the_state(fig1):
    rng = np.random.default_rng(11)
    t = 5.2
    for seed in range(50):
        s1 = random_state(2, pure=False, seed=3 * seed)
        s2 = random_state(2, pure=False, seed=3 * seed + 1)
        alpha = rng.uniform()
        mixed = alpha * s1.mat + (1 - alpha) * s2.mat
        p_mix = simulate_measurement(replace(fig1, rho_s=type(s1).from_matrix(mixed)), t)
        p_1 = simulate_measurement(replace(fig1, rho_s=s1), t)
        p_2 = simulate_measurement(replace(fig1, rho_s=s2), t)
        assert np.allclose(p_mix, alpha * p_1 + (1 - alpha) * p_2, atol=1e-11)


@pytest.mark.parametrize("epsilon", [0.05, 0.1, 0.4])
def test_map_does_not_depend_on_probe_amplitude(fig1, epsilon):
    reference = _map(fig1, 2.5)
    probed = _map(fig1, 2.5, epsilon=epsilon)
    assert np.allclose(probed.omega, reference.omega, atol=1e-9)
    assert np.allclose(probed.kvec, reference.kvec, atol=1e-12)


def test_identity_offset_shifts_k_not_omega(fig1):
    shifted = ObservablePair(
        o_s=fig1.pair.o_s + 0.7 * np.eye(2), o_a=fig1.pair.o_a - 0.3 * np.eye(2)
    )
    runtime = replace(fig1, pair=shifted, components=qubit_observable_rows(shifted))
    t = 4.1
    base, moved = _map(fig1, t), _map(runtime, t)
    assert not np.allclose(base.kvec, moved.kvec)
    # the O_S (x) O_A row picks up multiples of the single-side rows, det is unchanged
    assert determinant(moved) == pytest.approx(determinant(base), abs=1e-12)


def test_map_is_singular_at_time_zero(fig1):
    tmap = _map(fig1, 0.0)
    assert abs(determinant(tmap)) < 1e-13
    assert np.allclose(tmap.omega[1], 0.0, atol=1e-13), "ancilla row carries no information"
    with pytest.raises(SingularMatrixError):
        reconstruct(tmap, simulate_measurement(fig1, 0.0))


def test_counterexample_determinant_magnitude():
    pair = ObservablePair(
        o_s=qubit_observable([0.0, 1.0, 1.0, 1.0]), o_a=qubit_observable([0.0, 1.0, 0.5, 0.0])
    )
    tmap = build_map(
        hamiltonian_spectrum_4210(),
        ancilla_state((0.0, 0.25, 0.25)),
        qubit_observable_rows(pair),
        math.pi / 2,
    )
    assert abs(determinant(tmap)) == pytest.approx(9 / 512, abs=1e-9)


@pytest.mark.integration
def test_jacobi_formula_matches_direct_difference(fig1):
    h, anc, comps = fig1.hamiltonian, fig1.ancilla, fig1.components
    checked = 0
    for t in fig1.tgrid.points():
        jacobi = ddet_dt(h, anc, comps, t)
        if abs(jacobi) <= 1e-6:
            continue
        direct = ddet_dt_central(h, anc, comps, t)
        assert abs(jacobi - direct) <= 1e-5 * abs(jacobi) + 1e-9, f"mismatch at t={t}"
        checked += 1
    assert checked > 1000


def test_derivative_step_range_is_enforced(fig1):
    with pytest.raises(ValueError):
        map_derivative(fig1.hamiltonian, fig1.ancilla, fig1.components, 1.0, step=0.5)


def test_wrong_component_count_rejected(fig1):
    with pytest.raises(DimensionMismatchError):
        build_map(fig1.hamiltonian, fig1.ancilla, fig1.components[:2], 1.0)


def test_round_trip_recovers_state(fig1):
    rng = np.random.default_rng(2024)
    checked = 0
    for seed in range(100):
        rho_s = random_state(2, pure=False, seed=seed)
        t = float(rng.uniform(0.1, 20.0))
        runtime = replace(fig1, rho_s=rho_s)
        tmap = _map(runtime, t)
        result = reconstruct(tmap, simulate_measurement(runtime, t))
        if result.condition >= 1e6:
            continue
        truth = coherence_from_density(rho_s).components
        assert np.allclose(result.rho0.components, truth, atol=1e-8), f"seed {seed}, t={t}"
        assert result.valid
        checked += 1
    assert checked > 0


def test_unphysical_measurements_are_flagged(fig1):
    t = 3.7
    tmap = _map(fig1, t)
    far = tmap.predict(np.array([2.0, 0.0, 0.0]))
    result = reconstruct(tmap, far)
    assert not result.valid
    assert result.validity_error


def test_spectral_projectors_order_and_degeneracy():
    projectors = spectral_projectors(np.diag([3.0, -1.0, 0.5]))
    assert np.allclose(projectors[0], np.diag([0.0, 1.0, 0.0]))
    assert np.allclose(sum(projectors), np.eye(3))
    with pytest.raises(DegenerateSpectrumError):
        spectral_projectors(np.diag([1.0, 1.0, 2.0]))


def test_qutrit_components_and_map_size():
    o_s = spectral_observable([-1.0, 0.0, 1.0], random_unitary(3, 1))
    o_a = spectral_observable([-1.0, 0.5, 2.0], random_unitary(3, 2))
    comps = ndim_probability_components(o_s, o_a)
    assert len(comps) == 8
    h = hamiltonian_interaction()
    with pytest.raises(DimensionMismatchError):
        build_map(h, random_state(3, True, 0), comps, 1.0)


def test_maximally_mixed_system_recovered_as_zero_vector(fig1):
    centre = density_from_coherence(CoherenceVector(dim=2, components=np.zeros(3)))
    runtime = replace(fig1, rho_s=centre)
    for t in np.linspace(0.5, 20.0, 40):
        tmap = _map(runtime, t)
        result = reconstruct(tmap, simulate_measurement(runtime, t))
        if result.condition < 1e4:
            assert result.rho0.norm < 1e-9
            return
    pytest.fail("no well-conditioned time found")
