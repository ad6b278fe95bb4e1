import math

import numpy as np
import pytest

from lorentz21.fuchsian import Mat2, regular_polygon_rep
from lorentz21.laminations import GeodesicH2, WeightedMulticurve
from lorentz21.minkowski import RP1Point, adjoint_to_so21, hyperboloid_normalize
from lorentz21.quakes import (
    CircleMap,
    EarthquakeMap,
    EquivariantEarthquakeMap,
    FiniteLaminationH2,
    boundary_value,
    earthquake_along,
    lamination_from_json,
    lamination_to_json,
    quadric_action_example,
    real_boundary_point,
    rep_after_earthquake,
    uhp_point,
)


def single_leaf(weight, base_negative=True):
    """The upper-half-plane geodesic (0, infinity), weighted; base region
    on the negative reals when base_negative."""
    leaf = GeodesicH2(real_boundary_point(0.0), real_boundary_point(None))
    base = uhp_point(-1.0, 1.0) if base_negative else uhp_point(1.0, 1.0)
    return FiniteLaminationH2([(leaf, weight)], base)


def bpoint(quake, r):
    """Image of the boundary real r (None = infinity) as a real again."""
    x = quake.boundary_point(real_boundary_point(r))
    u, v = x.v
    if abs(v) < 1e-12:
        return None
    return u / v


def test_uhp_point():
    p = uhp_point(0.0, 1.0)
    assert np.max(np.abs(p - np.array([0.0, 0.0, 1.0]))) < 1e-15
    with pytest.raises(ValueError):
        uhp_point(0.0, -1.0)


@pytest.mark.parametrize("s", [2.0, 4.0, 9.0])
def test_single_leaf_boundary_anchor(s):
    """Left quake along (0, infinity) with weight log s and base on the
    negatives: identity on the negative reals, multiplication by s on
    the positives."""
    quake = earthquake_along(single_leaf(math.log(s)), side="left")
    for r in (-3.0, -0.5, -17.0):
        assert abs(bpoint(quake, r) - r) < 1e-12
    for r in (0.5, 1.0, 7.0):
        assert abs(bpoint(quake, r) - s * r) < 1e-12 * max(1.0, s * r)
    assert abs(bpoint(quake, 0.0)) < 1e-12
    assert bpoint(quake, None) is None


def test_single_leaf_interior_points():
    s = 4.0
    quake = earthquake_along(single_leaf(math.log(s)))
    p = uhp_point(-2.0, 1.0)
    assert np.max(np.abs(quake(p) - p)) < 1e-12
    q = uhp_point(1.0, 1.0)
    expect = uhp_point(s * 1.0, s * 1.0)
    assert np.max(np.abs(quake(q) - expect)) < 1e-12


def test_scale_additivity():
    lamination = single_leaf(0.3)
    q1 = earthquake_along(lamination, scale=1.0)
    q2 = earthquake_along(lamination, scale=2.5)
    q35 = earthquake_along(lamination, scale=3.5)
    p = uhp_point(2.0, 1.5)
    assert np.max(np.abs(q35(p) - q1(q2(p)))) < 1e-12


def test_right_after_left_fixes_base_side():
    lamination = single_leaf(0.7)
    left = earthquake_along(lamination, side="left")
    right = earthquake_along(lamination, side="right")
    # the two quakes are inverse on every region
    for u, v in [(-1.0, 1.0), (2.0, 0.5), (0.3, 2.0)]:
        p = uhp_point(u, v)
        assert np.max(np.abs(right(left(p)) - p)) < 1e-9


def test_scale_zero_is_identity():
    quake = earthquake_along(single_leaf(1.0), scale=0.0)
    p = uhp_point(3.0, 2.0)
    assert np.max(np.abs(quake(p) - p)) < 1e-15


def test_on_leaf_point_two_valued():
    lamination = single_leaf(math.log(2.0))
    quake = earthquake_along(lamination)
    p = uhp_point(0.0, 1.0)  # on the leaf
    with pytest.raises(ValueError):
        quake.apply(p)
    lo, hi = quake.one_sided_values(p, eps=1e-8)
    vals = sorted([np.max(np.abs(v - p)) for v in (lo, hi)])
    # one limit fixes the point, the other moves it along the leaf
    assert vals[0] < 1e-6
    assert vals[1] > 0.1


def test_mobius_equivariance():
    """Conjugating the lamination and basepoint transforms the quake by
    conjugation."""
    g = Mat2(np.array([[1.3, 0.4], [0.2, 1.0]]))
    A = adjoint_to_so21(g)
    leaf = GeodesicH2(RP1Point.from_theta(0.12), RP1Point.from_theta(0.55))
    base = uhp_point(0.3, 0.8)
    lam1 = FiniteLaminationH2([(leaf, 0.6)], base)
    lam2 = FiniteLaminationH2([(leaf.apply(g), 0.6)], A @ base)
    q1 = earthquake_along(lam1)
    q2 = earthquake_along(lam2)
    p = uhp_point(1.7, 0.4)
    assert np.max(np.abs(q2(A @ p) - A @ q1(p))) < 1e-12


def test_boundary_map_monotone():
    leaf1 = GeodesicH2(RP1Point.from_theta(0.1), RP1Point.from_theta(0.4))
    leaf2 = GeodesicH2(RP1Point.from_theta(0.55), RP1Point.from_theta(0.8))
    lamination = FiniteLaminationH2([(leaf1, 0.9), (leaf2, 1.4)])
    cm = boundary_value(earthquake_along(lamination), samples=128)
    assert cm.is_monotone()
    cm_r = boundary_value(earthquake_along(lamination, side="right"), samples=128)
    assert cm_r.is_monotone()


def test_lamination_disjointness_enforced():
    leaf1 = GeodesicH2(RP1Point.from_theta(0.1), RP1Point.from_theta(0.5))
    leaf2 = GeodesicH2(RP1Point.from_theta(0.3), RP1Point.from_theta(0.7))
    with pytest.raises(ValueError):
        FiniteLaminationH2([(leaf1, 1.0), (leaf2, 1.0)])
    with pytest.raises(ValueError):
        FiniteLaminationH2([(leaf1, -1.0)])


def test_lamination_json_roundtrip():
    lamination = single_leaf(0.8)
    data = lamination_to_json(lamination)
    lam2 = lamination_from_json(data)
    assert len(lam2.leaves) == 1
    assert lam2.leaves[0][1] == 0.8
    assert np.max(np.abs(lam2.basepoint - lamination.basepoint)) < 1e-12


@pytest.mark.parametrize("s", [2.0, 4.0, 9.0])
def test_quadric_action_example(s):
    ex = quadric_action_example(s)
    assert np.max(np.abs(ex["start"] - np.array([[1, 1], [1, 1]]))) == 0.0
    assert np.max(np.abs(ex["mid"] - np.array([[s, 1], [s, 1]]))) < 1e-12
    assert np.max(np.abs(ex["end"] - np.array([[s * s, s], [s, 1]]))) < 1e-12
    r = math.sqrt(s)
    assert np.max(np.abs(ex["half"] - np.array([[s, r], [r, 1]]))) < 1e-12
    # the half-measure image lies on the plane {b = c}
    assert abs(ex["half"][0, 1] - ex["half"][1, 0]) < 1e-12


def test_circle_map_monotone_and_eval():
    cm = CircleMap([(0.1, 0.2), (0.4, 0.5), (0.8, 0.9)])
    assert cm.is_monotone()
    assert abs(cm.evaluate(0.4) - 0.5) < 1e-12
    bad = CircleMap([(0.1, 0.5), (0.4, 0.2), (0.8, 0.9)])
    assert not bad.is_monotone()


@pytest.fixture(scope="module")
def octagon():
    return regular_polygon_rep(2)


def test_rep_after_earthquake_zero_scale(octagon):
    mc = WeightedMulticurve([("a1", 1.0)])
    out = rep_after_earthquake(octagon, mc, 0.0)
    assert all(a.dist(b) == 0.0 for a, b in zip(out.generators, octagon.generators))


def test_rep_after_earthquake_valid_and_traces(octagon):
    mc = WeightedMulticurve([("a1", 0.4)])
    out = rep_after_earthquake(octagon, mc, 1.0, L=3)
    assert out.is_valid(1e-6)
    # the twisting curve and any disjoint curve keep their traces
    for word in ("a1", "a2"):
        from lorentz21.fuchsian import parse_word

        w = parse_word(word)
        t_old = abs(octagon.evaluate(w).trace())
        t_new = abs(out.evaluate(w).trace())
        assert abs(t_old - t_new) < 1e-8
    # a transverse curve does not
    t_old = abs(octagon.evaluate((2,)).trace())
    t_new = abs(out.evaluate((2,)).trace())
    assert abs(t_old - t_new) > 1e-3


def test_equivariant_quake_equivariance(octagon):
    mc = WeightedMulticurve([("a1", 0.4)])
    quake = EquivariantEarthquakeMap(octagon, mc, scale=1.0, L=3)
    out = rep_after_earthquake(octagon, mc, 1.0, L=3)
    p = quake.lamination.basepoint
    for i in range(4):
        lhs = quake(adjoint_to_so21(octagon.generators[i]) @ p)
        rhs = adjoint_to_so21(out.generators[i]) @ quake(p)
        assert np.max(np.abs(lhs - rhs)) < 1e-9
