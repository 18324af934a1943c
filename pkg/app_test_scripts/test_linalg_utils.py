"""
Tests for the dense linear algebra kernels
"""

import sys
import os
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.utils.linalg_utils import (
    DimensionMismatchError,
    NotHermitianError,
    SingularMatrixError,
    cond2,
    det_and_cofactors,
    herm_eig,
    hermitize,
    is_hermitian,
    kron,
    partial_trace,
    solve,
    svd,
)

pytestmark = pytest.mark.unit


def _random_complex(n, m, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


def test_kron_index_convention():
    a = np.array([[1, 2], [3, 4]])
    b = np.array([[0, 5], [6, 7]])
    k = kron(a, b)
    assert k.shape == (4, 4)
    # (a kron b)[i*2 + k, j*2 + l] = a[i, j] * b[k, l]
    assert k[1 * 2 + 1, 0 * 2 + 0] == a[1, 0] * b[1, 0]
    assert k[0 * 2 + 0, 1 * 2 + 1] == a[0, 1] * b[0, 1]


def test_partial_trace_of_product_returns_factors():
    a = hermitize(_random_complex(2, 2, 1))
    b = hermitize(_random_complex(3, 3, 2))
    a = a / np.trace(a)
    b = b / np.trace(b)
    product = kron(a, b)

    assert np.allclose(partial_trace(product, 2, 3, keep="S"), a, atol=1e-12)
    assert np.allclose(partial_trace(product, 2, 3, keep="A"), b, atol=1e-12)


def test_partial_trace_rejects_bad_split():
    with pytest.raises(DimensionMismatchError):
        partial_trace(np.eye(4), 3, 2)
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), 2, 2, keep="B")


def test_herm_eig_reassembles_and_sorts():
    a = hermitize(_random_complex(4, 4, 3))
    eig = herm_eig(a)
    assert np.all(np.diff(eig.eigenvalues) >= 0), "eigenvalues should be ascending"
    assert np.allclose(eig.reassemble(), a, atol=1e-12)


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_svd_reconstructs_matrix():
    a = _random_complex(3, 2, 4)
    u, s, v = svd(a)
    assert np.all(np.diff(s) <= 0), "singular values should be descending"
    assert np.allclose((u * s) @ v.conj().T, a, atol=1e-12)


def test_cofactors_give_adjugate_identity():
    rng = np.random.default_rng(5)
    m = rng.normal(size=(4, 4))
    det, cof = det_and_cofactors(m)
    assert det == pytest.approx(np.linalg.det(m), rel=1e-12)
    assert np.allclose(m @ cof.T, det * np.eye(4), atol=1e-10)


def test_cofactors_of_rank_deficient_matrix_vanish():
    # rank n - 2 leaves every (n-1)-minor singular
    m = np.outer([1.0, 2.0, 3.0], [1.0, -1.0, 0.5])
    det, cof = det_and_cofactors(m)
    assert abs(det) < 1e-14
    assert np.max(np.abs(cof)) < 1e-14


def test_solve_and_singular_system():
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    x = solve(a, np.array([3.0, 5.0]))
    assert np.allclose(a @ x, [3.0, 5.0])

    with pytest.raises(SingularMatrixError):
        solve(np.zeros((2, 2)), np.array([1.0, 1.0]))
    with pytest.raises(DimensionMismatchError):
        solve(a, np.array([1.0, 2.0, 3.0]))


def test_cond2_is_infinite_for_zero_row():
    assert cond2(np.diag([1.0, 0.0])) == float("inf")
    assert cond2(np.diag([4.0, 2.0])) == pytest.approx(2.0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000), n=st.integers(min_value=2, max_value=6))
def test_hermitize_is_hermitian(seed, n):
    assert is_hermitian(hermitize(_random_complex(n, n, seed)))


def test_kron_is_associative():
    for seed in range(5):
        a, b, c = (_random_complex(2, 2, 10 * seed + i) for i in range(3))
        assert np.allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-14)


def test_partial_trace_is_linear():
    m1 = _random_complex(6, 6, 21)
    m2 = _random_complex(6, 6, 22)
    alpha, beta = 0.3, -1.7
    for keep in ("S", "A"):
        combined = partial_trace(alpha * m1 + beta * m2, 2, 3, keep=keep)
        separate = alpha * partial_trace(m1, 2, 3, keep=keep) + beta * partial_trace(m2, 2, 3, keep=keep)
        assert np.allclose(combined, separate, atol=1e-13)


def test_partial_trace_of_bell_state_is_maximally_mixed():
    bell = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)
    rho = np.outer(bell, bell.conj())
    assert np.allclose(partial_trace(rho, 2, 2, keep="S"), np.eye(2) / 2, atol=1e-15)
    assert np.allclose(partial_trace(rho, 2, 2, keep="A"), np.eye(2) / 2, atol=1e-15)


def _leibniz_det(m):
    n = m.shape[0]
    total = 0.0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inversions * np.prod([m[i, perm[i]] for i in range(n)])
    return total


def test_det_matches_permutation_expansion():
    m = np.random.default_rng(3).normal(size=(3, 3))
    det, _ = det_and_cofactors(m)
    assert det == pytest.approx(_leibniz_det(m), abs=1e-12)


def test_cofactor_expansion_along_every_column():
    m = np.random.default_rng(8).normal(size=(4, 4))
    det, cof = det_and_cofactors(m)
    for j in range(4):
        assert np.sum(m[:, j] * cof[:, j]) == pytest.approx(det, abs=1e-12)
        assert np.sum(m[j, :] * cof[j, :]) == pytest.approx(det, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000), n=st.integers(min_value=2, max_value=5))
def test_solve_undoes_multiplication(seed, n):
    rng = np.random.default_rng(seed)
    # diagonally dominant, so well conditioned
    a = rng.normal(size=(n, n)) + n * np.eye(n)
    x = rng.normal(size=n)
    assert np.allclose(solve(a, a @ x), x, atol=1e-10)
