import math
from fractions import Fraction

import numpy as np
import pytest
from conftest import random_instance

from depthkit.geometry import DimensionError, beta_region_contains, triangle_contains
from depthkit.oracles import (DepthCount, beta_skeleton_depth_bf, depth_pair_sets,
                              halfspace_depth_bf, simplicial_depth_bf)


@pytest.mark.parametrize("beta", [1, 2, "inf"])
def test_skeleton_diamond(diamond, beta):
    dc = beta_skeleton_depth_bf((0, 0), diamond, beta)
    assert (dc.contained, dc.denominator) == (6, 6)


@pytest.mark.parametrize("beta", [1, Fraction(3, 2), 10])
def test_skeleton_vanishes_far_away(diamond, beta):
    assert beta_skeleton_depth_bf((100, 100), diamond, beta).contained == 0


def test_skeleton_matches_pairwise_predicate(rng):
    for _ in range(30):
        q, X = random_instance(rng, int(rng.integers(2, 12)), -20, 20, dup_rate=0.2)
        for beta in (1, Fraction(3, 2), "inf"):
            want = sum(beta_region_contains(q, tuple(X[i]), tuple(X[j]), beta)
                       for i in range(len(X)) for j in range(i + 1, len(X)))
            assert beta_skeleton_depth_bf(q, X, beta).contained == want


def test_skeleton_any_dimension():
    X = np.array([(1, 0, 0), (-1, 0, 0), (0, 0, 5)])
    assert beta_skeleton_depth_bf((0, 0, 0), X, 1).contained == 3
    with pytest.raises(DimensionError):
        beta_skeleton_depth_bf((0, 0), X, 1)


def test_skeleton_needs_two_points():
    with pytest.raises(ValueError):
        beta_skeleton_depth_bf((0, 0), [(1, 1)], 1)


@pytest.mark.parametrize("q,S,want", [
    ((0, 0), [(1, 0), (-1, 0), (0, 1)], (1, 1)),
    ((0, 0), [(1, 0), (-1, 0), (0, 1), (0, -1)], (4, 4)),
    ((2, 0), [(1, 0), (-1, 0), (0, 1), (0, -1)], (0, 4)),
])
def test_simplicial_examples(q, S, want):
    dc = simplicial_depth_bf(q, S)
    assert (dc.contained, dc.denominator) == want


def test_simplicial_matches_triangle_predicate(rng):
    for _ in range(20):
        q, X = random_instance(rng, int(rng.integers(3, 9)), -5, 5, dup_rate=0.1)
        pts = [tuple(int(v) for v in p) for p in X]
        want = sum(triangle_contains(q, pts[i], pts[j], pts[k])
                   for i in range(len(pts)) for j in range(i + 1, len(pts))
                   for k in range(j + 1, len(pts)))
        assert simplicial_depth_bf(q, X).contained == want


@pytest.mark.parametrize("q,count,norm", [((0, 0), 2, Fraction(1)), ((2, 0), 0, Fraction(0)),
                                          ((1, 0), 1, Fraction(1, 2))])
def test_halfspace_examples(diamond, q, count, norm):
    dc = halfspace_depth_bf(q, diamond)
    assert dc.contained == count and dc.normalized == norm


def _sweep_min(q, X, steps=3600):
    """Closed-halfplane minimum over a dense set of float directions."""
    V = X.astype(float) - np.asarray(q, dtype=float)
    best = len(X)
    for t in np.arange(steps) * (2 * math.pi / steps):
        s = V @ np.array([math.cos(t), math.sin(t)])
        best = min(best, int(np.count_nonzero(s >= -1e-9)))
    return best


def test_halfspace_candidates_agree_with_sweep(rng):
    # general-position data so a finite sweep cannot miss the optimum
    for _ in range(15):
        q, X = random_instance(rng, int(rng.integers(3, 25)), -10_000, 10_000)
        assert halfspace_depth_bf(q, X).contained <= _sweep_min(q, X)
        assert halfspace_depth_bf(q, X).contained == _sweep_min(q, X, 36_000)


def test_halfspace_zero_iff_outside_hull():
    X = np.array([(0, 0), (10, 0), (0, 10)])
    assert halfspace_depth_bf((20, 20), X).contained == 0
    assert halfspace_depth_bf((1, 1), X).contained > 0
    assert halfspace_depth_bf((5, 5), X).contained > 0  # on the hull edge


def test_halfspace_all_trivial():
    dc = halfspace_depth_bf((1, 1), [(1, 1), (1, 1)])
    assert dc.contained == 2 and dc.normalized == 1


def test_halfspace_normalization_capped():
    assert DepthCount.halfspace(3, 4).normalized == 1
    assert DepthCount.halfspace(1, 4).normalized == Fraction(1, 2)


def test_pair_sets_examples():
    pr = depth_pair_sets((0, 0), [(1, 0), (-1, 0), (0, 1)])
    assert len(pr.b_in) == 3 and len(pr.s_in) == 1
    far = depth_pair_sets((9, 9), [(1, 0), (-1, 0), (0, 1)])
    assert not far.b_in and not far.s_in


def test_pair_sets_bound_on_random_data(rng):
    for _ in range(40):
        q, X = random_instance(rng, int(rng.integers(3, 15)))
        pr = depth_pair_sets(q, X)
        n = len(X)
        assert (n - 2) * len(pr.b_in) >= 2 * len(pr.s_in)
        if pr.s_in:
            assert pr.b_in


def test_triangle_gives_two_gabriel_regions(rng):
    for _ in range(50):
        q, X = random_instance(rng, 3)
        pr = depth_pair_sets(q, X)
        if len(pr.s_in) == 1:
            assert len(pr.b_in) >= 2


def test_boundary_step_changes_count_by_one():
    S = np.array([(1, 0), (-1, 0), (5, 7)])
    inside = beta_skeleton_depth_bf((0, 1), S, 1).contained   # on the (1,0)-(-1,0) circle
    outside = beta_skeleton_depth_bf((0, 2), S, 1).contained
    assert inside - outside == 1


def test_large_coordinates_exact():
    big = 10**15
    S = [(big, 0), (-big, 0), (0, big), (0, -big)]
    assert beta_skeleton_depth_bf((0, 0), S, Fraction(3, 2)).contained == 6
    assert halfspace_depth_bf((0, 0), S).contained == 2
