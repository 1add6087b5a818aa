import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypercone.conelib import build_orthant, build_psd_deriv, build_schur_horn
from hypercone.errors import ArgumentError, UnsupportedFormError
from hypercone.lmi import (AffineMap, AffineMatrixMap, AffineScalar, SdpRepresentation, embed,
                           freeze_membership_problem, from_json, new_representation, smat, svec,
                           structurally_equal, sym_pairs, to_json)
from hypercone.sdpsolve import feasibility_margin


def halfspace(n=1):
    rep = new_representation(n)
    rep.add_nonneg(AffineScalar.var(0))
    return rep


def test_svec_roundtrip(rng):
    G = rng.standard_normal((4, 4))
    X = G + G.T
    assert np.array_equal(smat(svec(X), 4), X)
    assert sym_pairs(3) == [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]


def test_empty_representation_is_full_space():
    rep = new_representation(3)
    assert rep.size() == 0
    assert feasibility_margin(rep, [-5.0, 1.0, 2.0]) == pytest.approx(1.0, abs=1e-7)
    assert new_representation(0).size() == 0


def test_halfspace_membership():
    rep = halfspace(1)
    assert rep.size() == 1
    assert feasibility_margin(rep, [1.0]) > 0
    assert feasibility_margin(rep, [-1.0]) == pytest.approx(-1.0, abs=1e-7)


def test_embed_halfspace_via_sum():
    host = new_representation(2)
    embed(host, halfspace(1), AffineMap([AffineScalar.linear([0, 1], [1.0, 1.0])]))
    assert host.size() == 1
    assert host.nonneg_scalars[0].coeffs == {0: 1.0, 1: 1.0}


def test_embed_psd2_grows_by_two():
    host = new_representation(3)
    embed(host, build_psd_deriv(2, 0), AffineMap.identity(range(3)))
    assert host.size() == 2


def test_embed_dimension_mismatch():
    with pytest.raises(ArgumentError):
        embed(new_representation(2), halfspace(1), AffineMap.identity(range(2)))


def test_embed_is_size_additive_and_monotone(rng):
    host = build_orthant(4, 2)
    before = host.size()
    cone = build_orthant(4, 1)
    embed(host, cone, AffineMap.identity(range(4)))
    assert host.size() == before + cone.size()
    # points feasible after adding constraints were feasible before
    looser = build_orthant(4, 2)
    for _ in range(15):
        x = rng.uniform(0, 2) + rng.standard_normal(4)
        if feasibility_margin(host, x) > 1e-6:
            assert feasibility_margin(looser, x) > -1e-7


def test_schur_horn_size_four():
    # 3 ordering scalars + one 4-block + 2 * (4 + 4 + 1)
    assert build_schur_horn(4).size() == 25


def test_freeze_boundary_point():
    rep = build_orthant(3, 1)
    assert abs(feasibility_margin(freeze_membership_problem(rep, [2.0, 2.0, -1.0]))) <= 1e-6


def test_freeze_rejects_projection_form():
    rep = SdpRepresentation(0)
    rep.add_aux(1)
    rep.output_map = AffineMap.identity([0])
    with pytest.raises(UnsupportedFormError):
        freeze_membership_problem(rep, [1.0])


def test_freeze_checks_length():
    with pytest.raises(ArgumentError):
        freeze_membership_problem(halfspace(1), [1.0, 2.0])


def test_variable_index_checked():
    rep = new_representation(1)
    with pytest.raises(ArgumentError):
        rep.add_nonneg(AffineScalar.var(3))


def random_representation(seed):
    r = np.random.default_rng(seed)
    rep = SdpRepresentation(int(r.integers(0, 4)), f"random{seed}")
    rep.add_aux(int(r.integers(1, 4)))
    for _ in range(int(r.integers(0, 3))):
        d = int(r.integers(1, 4))
        blk = AffineMatrixMap.zeros(d)
        G = r.standard_normal((d, d))
        blk.const = G + G.T
        for v in r.choice(rep.nvars, size=min(rep.nvars, 2), replace=False):
            H = r.standard_normal((d, d))
            blk.coeffs[int(v)] = H + H.T
        rep.add_block(blk)
    for _ in range(int(r.integers(0, 3))):
        rep.add_nonneg(AffineScalar(float(r.standard_normal()), {0: float(r.standard_normal())}))
    if r.random() < 0.5:
        rep.add_equality(AffineScalar(1.5, {rep.nvars - 1: -2.0}))
    if rep.primal_dim == 0:
        rep.output_map = AffineMap([AffineScalar.var(i, 2.0) for i in range(rep.nvars)])
    return rep


@given(st.integers(0, 10_000))
@settings(max_examples=100, deadline=None)
def test_json_roundtrip(seed):
    rep = random_representation(seed)
    back = from_json(to_json(rep))
    assert structurally_equal(rep, back)
    assert back.size() == rep.size()


def test_json_roundtrip_built_cone():
    rep = build_psd_deriv(3, 1, "deriv")
    assert structurally_equal(rep, from_json(to_json(rep)))
