import numpy as np
import pytest

from hypercone.conelib import build_orthant_dual, build_psd_deriv_dual
from hypercone.errors import StrategyError, UnsupportedFormError
from hypercone.lmi import freeze_membership_problem, smat, svec
from hypercone.membership import directional_margin, member, projection_residual, sample_members
from hypercone.oracle import dual_pairing_min
from hypercone.symlin import elem_sym

from helpers import (decided_orthant_points, oracle_orthant_members, oracle_psd_members,
                     shifted_vector)


def e_grad(x, d):
    """Gradient of ``e_d`` at ``x``: ``d/dx_i e_d(x) = e_{d-1}(x without x_i)``."""
    return np.array([elem_sym(np.delete(x, i), d - 1) if d >= 1 else 0.0 for i in range(x.size)])


def trace_normal(n):
    return svec(np.eye(n))


def as_matrices(samples, n):
    return [smat(s, n) for s in samples]


def test_orthant_dual_k0_is_orthant():
    rep = build_orthant_dual(3, 0)
    assert rep.is_slice_form
    assert member(rep, [1.0, 0.5, 2.0]).decision == "In"
    assert member(rep, [1.0, 0.0, 2.0]).decision == "Boundary"
    assert member(rep, [1.0, -0.1, 2.0]).decision == "Out"


def test_orthant_dual_top_is_ray():
    for n in (2, 3, 5):
        rep = build_orthant_dual(n, n - 1)
        assert member(rep, 2.0 * np.ones(n)).decision == "In"
        w = np.ones(n)
        w[0] = 1.5
        assert member(rep, w).decision == "Out"
        assert member(rep, -np.ones(n)).decision == "Out"


def test_orthant_dual_full_space_is_zero():
    rep = build_orthant_dual(3, 3)
    assert member(rep, np.zeros(3)).decision == "In"
    assert member(rep, [0.0, 0.0, 1e-3]).decision == "Out"


def test_psd_dual_bases():
    rep = build_psd_deriv_dual(3, 0)
    assert member(rep, svec(np.diag([1.0, 0.5, 2.0]))).decision == "In"
    assert member(rep, svec(np.diag([1.0, -0.1, 2.0]))).decision == "Out"
    top = build_psd_deriv_dual(3, 2)
    assert member(top, svec(np.eye(3))).decision == "In"
    assert member(top, svec(np.diag([2.0, 1.0, 1.0]))).decision == "Out"


def test_dual_is_projection_form():
    rep = build_orthant_dual(4, 1)
    assert not rep.is_slice_form
    with pytest.raises(UnsupportedFormError):
        freeze_membership_problem(rep, np.ones(4))


def test_soc_strategy_not_offered_for_duals():
    with pytest.raises(StrategyError):
        build_orthant_dual(4, 2, "soc")


@pytest.mark.parametrize("strategy", ["deriv", "polar"])
def test_gradient_lies_in_dual(rng, strategy):
    # for x inside orthant(n,k), the gradient of e_{n-k} at x is in the dual cone
    for n in (3, 4):
        for k in range(1, n - 1):
            rep = build_orthant_dual(n, k, strategy)
            for _ in range(3):
                x = np.abs(rng.standard_normal(n)) + 0.1
                w = e_grad(x, n - k)
                w = w / np.linalg.norm(w)
                assert member(rep, w).decision == "In"


@pytest.mark.parametrize("strategy", ["deriv", "polar"])
def test_orthant_pairing(rng, strategy):
    for n in (3, 4):
        for k in range(n):
            if strategy == "polar" and k == n - 1:
                continue
            duals = sample_members(build_orthant_dual(n, k, strategy), rng, 10, np.ones(n))
            prims = oracle_orthant_members(rng, n, k, 10)
            assert dual_pairing_min(duals, prims) >= -1e-8


@pytest.mark.parametrize("strategy", ["deriv", "polar"])
def test_psd_pairing(rng, strategy):
    n = 3
    for k in range(n):
        duals = sample_members(build_psd_deriv_dual(n, k, strategy), rng, 6, trace_normal(n))
        prims = oracle_psd_members(rng, n, k, 6)
        assert dual_pairing_min(as_matrices(duals, n), prims) >= -1e-8


def test_pairing_separates_outside_points(rng):
    # a point outside orthant(n,k) pairs negatively with some sampled dual member
    n, k = 4, 1
    duals = sample_members(build_orthant_dual(n, k), rng, 60, np.ones(n))
    for x, inside in decided_orthant_points(rng, n, k, 20, gap=0.2):
        if not inside and x.sum() > 0:
            assert np.min(duals @ x) < 0


def test_dual_diagonal_slice(rng):
    n = 3
    for k in range(1, n):
        drep = build_orthant_dual(n, k)
        prep = build_psd_deriv_dual(n, k)
        seen = 0
        while seen < 4:
            y = shifted_vector(rng, n)
            a = directional_margin(drep, y, np.ones(n))
            b = directional_margin(prep, svec(np.diag(y)), svec(np.eye(n)))
            if abs(a) < 1e-6:
                continue
            seen += 1
            assert (a > 0) == (b > 0)


def test_projection_residual_is_distance():
    rep = build_orthant_dual(3, 2)
    # distance from (1, 2, 3) to the ray t * 1 is the norm of the centred vector
    w = np.array([1.0, 2.0, 3.0])
    assert projection_residual(rep, w) == pytest.approx(np.linalg.norm(w - w.mean()), abs=1e-6)
