from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hypercone.errors import ArgumentError, DefinitenessError, SingularPivotError
from hypercone.symlin import (as_symmetric, charpoly_coeffs, complement_basis, eigvals_sym,
                              elem_sym, elem_sym_all, inv_sqrt_pd, schur_complement)

from conftest import gram_schmidt_complement, random_orthogonal


def brute_elem_sym(x, k):
    return sum(np.prod(c) for c in combinations(x, k)) if k else 1.0


vectors = st.integers(1, 8).flatmap(
    lambda n: arrays(float, n, elements=st.floats(-3, 3, allow_nan=False)))


# elem_sym

def test_elem_sym_ones_is_binomial():
    assert elem_sym([1, 1, 1, 1], 2) == 6


def test_elem_sym_against_subset_sum():
    # brute force over 2-subsets: 1*2 + 1*3 + 2*3
    assert elem_sym([1, 2, 3], 2) == pytest.approx(brute_elem_sym([1, 2, 3], 2)) == 11


def test_elem_sym_cancels():
    assert elem_sym([5, -5], 1) == 0


def test_elem_sym_zero_degree_is_one():
    assert elem_sym([7.0, -2.0], 0) == 1.0


@pytest.mark.parametrize("k", [-1, 4])
def test_elem_sym_range(k):
    with pytest.raises(ArgumentError):
        elem_sym([1, 2, 3], k)


@given(vectors)
@settings(max_examples=200, deadline=None)
def test_elem_sym_matches_brute_force(x):
    for k in range(x.size + 1):
        ref = brute_elem_sym(x, k)
        assert elem_sym(x, k) == pytest.approx(ref, rel=1e-10, abs=1e-9)


@given(vectors, st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_elem_sym_permutation_invariant(x, r):
    perm = list(range(x.size))
    r.shuffle(perm)
    scale = max(1.0, np.max(np.abs(x))) ** x.size
    for k in range(x.size + 1):
        assert abs(elem_sym(x[perm], k) - elem_sym(x, k)) <= 1e-14 * scale * comb(x.size, k)


def test_elem_sym_all_consistent():
    x = np.array([0.5, -1.0, 2.0, 3.0])
    e = elem_sym_all(x)
    assert [elem_sym(x, k) for k in range(5)] == pytest.approx(e)


# charpoly / eigenvalues

def test_charpoly_identity():
    assert charpoly_coeffs(np.eye(3)) == pytest.approx([3, 3, 1])


def test_charpoly_diagonal():
    assert charpoly_coeffs(np.diag([1.0, 2.0, 3.0])) == pytest.approx([6, 11, 6])


def test_charpoly_zero():
    assert np.all(charpoly_coeffs(np.zeros((4, 4))) == 0)


def test_charpoly_convention_is_det_x_plus_t():
    # det(X + tI) at t = 1 equals 1 + E_1 + ... + E_n
    X = np.array([[2.0, 1.0], [1.0, -1.0]])
    assert 1 + charpoly_coeffs(X).sum() == pytest.approx(np.linalg.det(X + np.eye(2)))


def test_charpoly_of_diag_is_elem_sym(rng):
    worst = 0.0
    for _ in range(1000):
        n = rng.integers(1, 9)
        x = rng.uniform(-1, 1, n)
        E = charpoly_coeffs(np.diag(x))
        for k in range(1, n + 1):
            e = elem_sym(x, k)
            worst = max(worst, abs(E[k - 1] - e) / max(abs(e), 1e-300) if abs(e) > 1e-12 else abs(E[k - 1] - e))
    assert worst <= 1e-10


def test_eigvals_sorted_decreasing():
    assert eigvals_sym(np.diag([1.0, 3.0, 2.0])) == pytest.approx([3, 2, 1])
    assert eigvals_sym(np.eye(4)) == pytest.approx(np.ones(4))


def test_eigvals_two_by_two_closed_form():
    assert eigvals_sym(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx([1, -1])


def test_eigvals_backward_error(rng):
    for n in (1, 3, 7, 12):
        G = rng.standard_normal((n, n))
        X = G + G.T
        lam = eigvals_sym(X)
        scale = np.linalg.norm(X, 2)
        # spectral invariants: trace and Frobenius norm
        assert abs(lam.sum() - np.trace(X)) <= 1e-12 * scale * n
        assert abs(np.sum(lam ** 2) - np.sum(X * X)) <= 1e-12 * scale ** 2 * n
        for lv in lam:
            smin = np.linalg.svd(X - lv * np.eye(n), compute_uv=False)[-1]
            assert smin <= 1e-12 * scale * n


def test_as_symmetric_rejects_asymmetric():
    with pytest.raises(ArgumentError):
        as_symmetric([[1.0, 2.0], [0.0, 1.0]])
    S = as_symmetric([[1.0, 2.0], [2.0 + 1e-15, 1.0]])
    assert S[1, 0] == S[0, 1]
    assert not S.flags.writeable


# complement basis

@pytest.mark.parametrize("n", [2, 3, 5, 9])
def test_complement_basis_invariants(n):
    V = complement_basis(n).V
    assert V.shape == (n, n - 1)
    assert np.max(np.abs(V.T @ V - np.eye(n - 1))) <= 1e-12
    assert np.max(np.abs(V.T @ np.ones(n))) <= 1e-12


def test_complement_basis_deterministic():
    a = complement_basis(6).V
    b = complement_basis(6).V
    assert a.tobytes() == b.tobytes()


def test_complement_basis_needs_two():
    with pytest.raises(ArgumentError):
        complement_basis(1)


def test_complement_basis_q_is_orthogonal():
    Q = complement_basis(5).Q
    assert np.allclose(Q.T @ Q, np.eye(5), atol=1e-12)


def test_complement_determinant_identity_example():
    V = complement_basis(3).V
    assert 3 * np.linalg.det(V.T @ np.diag([1.0, 2.0, 3.0]) @ V) == pytest.approx(11)


def test_determinant_independent_of_basis_choice(rng):
    for n in range(2, 9):
        V = complement_basis(n).V
        W = gram_schmidt_complement(n)
        for _ in range(20):
            x = rng.uniform(-2, 2, n)
            a = np.linalg.det(V.T @ np.diag(x) @ V)
            b = np.linalg.det(W.T @ np.diag(x) @ W)
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


# Schur complement / inverse square root

def test_schur_identity():
    assert np.allclose(schur_complement(np.eye(4)), np.eye(3))


def test_schur_two_by_two():
    assert np.allclose(schur_complement(np.array([[2.0, 1.0], [1.0, 1.0]])), [[1.0]])


def test_schur_singular_pivot():
    with pytest.raises(SingularPivotError):
        schur_complement(np.array([[1.0, 1.0], [1.0, 0.0]]))


def test_inv_sqrt_examples():
    assert np.allclose(inv_sqrt_pd(np.eye(3)), np.eye(3))
    assert np.allclose(inv_sqrt_pd(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]))


def test_inv_sqrt_random(rng):
    for n in (2, 5, 8):
        Q = random_orthogonal(rng, n)
        B = Q @ np.diag(rng.uniform(0.1, 10, n)) @ Q.T
        S = inv_sqrt_pd(B)
        assert np.allclose(S, S.T)
        assert np.max(np.abs(S @ B @ S - np.eye(n))) <= 1e-10


def test_inv_sqrt_not_pd():
    with pytest.raises(DefinitenessError):
        inv_sqrt_pd(np.diag([1.0, -1.0]))
    with pytest.raises(DefinitenessError):
        inv_sqrt_pd(np.diag([1.0, 0.0]))
