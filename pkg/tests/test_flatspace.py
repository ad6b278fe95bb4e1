import math

import numpy as np
import pytest

from lorentz21.flatspace import (
    StandardTorusSpacetime,
    TranslationCocycle,
    coboundary_cocycle,
    cocycle_from_lamination,
    cocycle_residual,
    cyclic_boost_cocycle,
    cyclic_boost_rep,
    cyclic_initial_singularity,
    develop_surface,
    graph_slope_check,
    injectivity_gap,
    relator_residual,
    standard_torus,
    support_planes,
    zero_cocycle,
)
from lorentz21.fuchsian import GroupBall, regular_polygon_rep
from lorentz21.laminations import WeightedMulticurve
from lorentz21.minkowski import CausalClass, adjoint_to_so21, classify, inner


@pytest.fixture(scope="module")
def octagon():
    return regular_polygon_rep(2)


@pytest.fixture(scope="module")
def curve():
    return WeightedMulticurve([("a1", 1.0)])


@pytest.fixture(scope="module")
def lam_cocycle(octagon, curve):
    return cocycle_from_lamination(octagon, curve, L=3)


@pytest.fixture(scope="module")
def ball2(octagon):
    return GroupBall(octagon, 2)


def all_pair_residual(rep, coc, ball):
    words = ball.words()
    worst = 0.0
    for alpha in words:
        for beta in words:
            worst = max(worst, cocycle_residual(rep, coc, alpha, beta, ball))
    return worst


def test_zero_cocycle(octagon, ball2):
    coc = zero_cocycle(octagon)
    assert all_pair_residual(octagon, coc, ball2) == 0.0
    assert relator_residual(octagon, coc) == 0.0


def test_coboundary_cocycle(octagon, ball2):
    coc = coboundary_cocycle(octagon, np.array([0.3, -1.1, 0.2]))
    assert all_pair_residual(octagon, coc, ball2) < 1e-10
    assert relator_residual(octagon, coc) < 1e-10


def test_lamination_cocycle_descends(octagon, lam_cocycle, ball2):
    assert all_pair_residual(octagon, lam_cocycle, ball2) < 1e-8
    assert relator_residual(octagon, lam_cocycle) < 1e-8


def test_identity_sweep_matches_pair_loop(octagon, lam_cocycle):
    from lorentz21.flatspace import cocycle_identity_sweep

    ball1 = GroupBall(octagon, 1)
    assert abs(cocycle_identity_sweep(octagon, lam_cocycle, ball1)
               - all_pair_residual(octagon, lam_cocycle, ball1)) < 1e-12


def test_perturbed_cocycle_fails(octagon, lam_cocycle, ball2):
    vecs = [np.array(v, dtype=float) for v in lam_cocycle.to_json()["t"]]
    vecs[0] = vecs[0] + np.array([0.05, 0.0, 0.0])
    bad = TranslationCocycle(octagon, vecs)
    # ball-2 pairs concatenate freely (the shortest relation has length
    # 8), so the identity is only violated once a relation appears: the
    # two relator halves multiply to the canonical empty word
    assert relator_residual(octagon, bad) > 1e-4
    ball0 = GroupBall(octagon, 0)
    res = cocycle_residual(octagon, bad, (1, 2, -1, -2), (3, 4, -3, -4), ball0)
    assert res > 1e-4


def test_cocycle_linearity_in_weight(octagon):
    mcs = [WeightedMulticurve([("a1", w)]) for w in (0.25, 1.0)]
    c1 = cocycle_from_lamination(octagon, mcs[0], L=3)
    c2 = cocycle_from_lamination(octagon, mcs[1], L=3)
    for v1, v2 in zip(c1.gen_vectors, c2.gen_vectors):
        assert np.max(np.abs(np.asarray(v1, float) * 4.0 - np.asarray(v2, float))) < 1e-9


def test_cyclic_boost_cocycle_value():
    for lam_, w in [(1.3, 0.45), (0.7, 2.0)]:
        v = cyclic_boost_cocycle(lam_, w)
        assert np.max(np.abs(v - np.array([0.0, w, 0.0]))) < 1e-12


def test_cyclic_generator_word_cocycle_is_zero():
    # the boost generator path never crosses its own axis
    rep = cyclic_boost_rep(1.3)
    from lorentz21.laminations import transverse_vector
    from lorentz21.minkowski import hyperboloid_normalize

    p = hyperboloid_normalize(np.array([0.1, -0.4, 1.2]))
    q = adjoint_to_so21(rep.generators[0]) @ p
    assert np.max(np.abs(transverse_vector(rep, WeightedMulticurve([((1,), 0.5)]),
                                           p, q, 1))) == 0.0


def test_cyclic_initial_singularity_length():
    for w in (0.5, 2.0):
        seg = cyclic_initial_singularity(1.1, w)
        assert abs(seg.length - w) < 1e-9
    assert cyclic_initial_singularity(1.1, 0.0).length == 0.0
    with pytest.raises(ValueError):
        cyclic_initial_singularity(-1.0, 1.0)


@pytest.fixture(scope="module")
def patch(octagon, curve):
    return develop_surface(octagon, curve, density=120, L=3, seed=0)


def test_develop_surface_graph_slope(patch):
    assert graph_slope_check(patch) < 1.0


def test_develop_surface_injectivity(patch):
    assert injectivity_gap(patch, max_pairs=10000) >= -1e-9


def test_develop_surface_x_spacelike_or_zero(patch):
    for x in patch.xvals:
        assert classify(x) in (CausalClass.SPACELIKE, CausalClass.ZERO)


def test_develop_surface_empty_multicurve(octagon):
    p = develop_surface(octagon, WeightedMulticurve([]), density=30, L=2, seed=1)
    assert np.max(np.abs(p.xvals)) == 0.0
    assert np.max(np.abs(p.fvals - p.points)) == 0.0


def test_support_planes_contain_surface(patch):
    planes = support_planes(patch, count=32)
    assert len(planes) == 32
    for pl in planes:
        assert abs(inner(pl.normal, pl.normal)) < 1e-12
        for f in patch.fvals:
            assert pl.contains(f, tol=1e-9)


def test_support_planes_exclude_past(patch):
    # a deep past point violates some support plane
    far_past = np.array([0.0, 0.0, -50.0])
    planes = support_planes(patch, count=32)
    assert not all(pl.contains(far_past) for pl in planes)


def test_standard_torus():
    st = standard_torus(1.0, 0.5, 2.0, 3.0)
    # holonomies commute and preserve the region
    ab = st.A.compose(st.B)
    ba = st.B.compose(st.A)
    assert ab.dist(ba) < 1e-12
    p = np.array([0.5, 7.0, 2.0])
    assert StandardTorusSpacetime.contains(p)
    assert StandardTorusSpacetime.contains(st.A(p))
    assert StandardTorusSpacetime.contains(st.B(p))
    assert not StandardTorusSpacetime.contains(np.array([2.0, 0.0, 1.0]))
    assert not StandardTorusSpacetime.contains(np.array([0.0, 0.0, -1.0]))
    with pytest.raises(ValueError):
        standard_torus(1.0, 0.5, 2.0, 1.0)


def test_cocycle_requires_generator_count(octagon):
    with pytest.raises(ValueError):
        TranslationCocycle(octagon, [np.zeros(3)] * 3)
