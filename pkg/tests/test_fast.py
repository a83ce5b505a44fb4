from fractions import Fraction

import numpy as np
import pytest
from conftest import random_instance
from hypothesis import given, settings, strategies as st

from depthkit.fast import (AngularIndex, beta_skeleton_depth_decomposed, halfspace_depth_fast,
                           skd_infinity, spherical_depth_fast, translate)
from depthkit.geometry import BetaError
from depthkit.oracles import beta_skeleton_depth_bf, halfspace_depth_bf

BETAS = [Fraction(3, 2), 2, 3, 10]


def test_translate():
    assert translate([(1, 2)], (1, 2)).tolist() == [[0, 0]]
    assert translate([(3, 0), (0, 3)], (1, 1)).tolist() == [[2, -1], [-1, 2]]
    S = np.array([(5, -3), (7, 1)])
    assert (translate(translate(S, (2, 2)), (-2, -2)) == S).all()


def test_fast_examples(diamond):
    assert spherical_depth_fast((0, 0), [(1, 0), (-1, 0), (0, 1)]).contained == 3
    assert spherical_depth_fast((0, 0), diamond).contained == 6
    assert spherical_depth_fast((100, 100), diamond).contained == 0
    assert halfspace_depth_fast((0, 0), diamond).normalized == 1
    assert halfspace_depth_fast((2, 0), diamond).normalized == 0
    assert halfspace_depth_fast((1, 0), diamond).normalized == Fraction(1, 2)
    assert beta_skeleton_depth_decomposed((0, 0), diamond, 2).contained == 6
    assert skd_infinity((0, 0), diamond).contained == 6
    assert skd_infinity((0, 5), [(1, 0), (-1, 0)]).contained == 1


def test_decomposed_threshold_example():
    S = [(1, 0), (-1, 0)]
    assert beta_skeleton_depth_decomposed((0, 2), S, 2).contained == 0
    assert beta_skeleton_depth_decomposed((0, 2), S, 3).contained == 1
    assert beta_skeleton_depth_decomposed((0, 2), S, Fraction(5, 2)).contained == 1


@pytest.mark.parametrize("beta", [1, "inf", Fraction(1, 2)])
def test_decomposed_rejects(beta):
    with pytest.raises(BetaError):
        beta_skeleton_depth_decomposed((0, 0), [(1, 0), (2, 0)], beta)


@pytest.mark.parametrize("backend", ["linear", "angular"])
def test_fast_matches_oracles(rng, backend):
    for _ in range(60):
        q, X = random_instance(rng, int(rng.integers(2, 40)), -50, 50, dup_rate=0.15)
        assert spherical_depth_fast(q, X) == beta_skeleton_depth_bf(q, X, 1)
        assert skd_infinity(q, X) == beta_skeleton_depth_bf(q, X, "inf")
        assert halfspace_depth_fast(q, X) == halfspace_depth_bf(q, X)
        for beta in BETAS:
            got = beta_skeleton_depth_decomposed(q, X, beta, backend=backend)
            assert got == beta_skeleton_depth_bf(q, X, beta)


def test_collinear_and_duplicate_data():
    X = np.array([(k, 2 * k) for k in range(-4, 5)] + [(1, 2), (1, 2)])
    for q in [(0, 0), (1, 2), (3, 1), (10, 20)]:
        assert halfspace_depth_fast(q, X) == halfspace_depth_bf(q, X)
        assert spherical_depth_fast(q, X) == beta_skeleton_depth_bf(q, X, 1)


def test_big_coordinates_use_exact_path():
    big = 10**14
    X = np.array([(big, 1), (-big, 3), (7, big), (5, -big), (big, big)], dtype=object)
    for q in [(0, 0), (big // 2, -3)]:
        assert spherical_depth_fast(q, X) == beta_skeleton_depth_bf(q, X, 1)
        assert halfspace_depth_fast(q, X) == halfspace_depth_bf(q, X)
        assert beta_skeleton_depth_decomposed(q, X, 3, "angular") == beta_skeleton_depth_bf(q, X, 3)


def test_near_parallel_directions_beyond_float_resolution():
    # directions differ by about 1e-18 rad: float keys collide, certification must not
    a = 5 * 10**8
    X = np.array([(a, a + 1), (a + 1, a + 2), (-a, -a - 1), (-a - 1, -a - 2),
                  (2 * a, 2 * a + 2), (3, -7), (-a, a + 3), (a + 3, -a)])
    for q in [(0, 0), (1, 1), (-2, 5)]:
        assert halfspace_depth_fast(q, X) == halfspace_depth_bf(q, X)
        assert spherical_depth_fast(q, X) == beta_skeleton_depth_bf(q, X, 1)
        assert beta_skeleton_depth_decomposed(q, X, 2, "angular") == beta_skeleton_depth_bf(q, X, 2)


@pytest.mark.parametrize("dup_rate", [0.0, 0.3])
def test_sorted_key_path_matches_certified_path(rng, dup_rate):
    # scaling by 2**12 pushes coordinates past the exact-key bound
    for _ in range(30):
        q, X = random_instance(rng, int(rng.integers(2, 80)), dup_rate=dup_rate)
        Y, qy = X * 2**12, tuple(v * 2**12 for v in q)
        assert halfspace_depth_fast(q, X) == halfspace_depth_fast(qy, Y)
        assert spherical_depth_fast(q, X) == spherical_depth_fast(qy, Y)


def test_pair_memberships_even(rng):
    q, X = random_instance(rng, 50)
    idx = AngularIndex(translate(X, q))
    assert idx is not None
    # twice the count is the membership sum over points
    assert 2 * spherical_depth_fast(q, X).contained % 2 == 0


def _rot90(P):
    return np.column_stack([-P[:, 1], P[:, 0]])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(3, 30), st.integers(1, 5))
def test_spherical_rotation_and_scaling_invariance(seed, n, k):
    rng = np.random.default_rng(seed)
    q, X = random_instance(rng, n, -100, 100)
    q = np.asarray(q)
    base = spherical_depth_fast(tuple(q), X).contained
    V = X - q
    # rational rotation by (3/5, 4/5) after scaling by 5
    R = np.column_stack([3 * V[:, 0] - 4 * V[:, 1], 4 * V[:, 0] + 3 * V[:, 1]])
    assert spherical_depth_fast((0, 0), R).contained == base
    assert spherical_depth_fast((0, 0), _rot90(V) * k).contained == base


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 30))
def test_halfspace_affine_invariance(seed, n):
    rng = np.random.default_rng(seed)
    q, X = random_instance(rng, n, -100, 100, dup_rate=0.1)
    while True:
        A = rng.integers(-5, 6, size=(2, 2))
        if round(np.linalg.det(A)) != 0:
            break
    t = rng.integers(-50, 50, size=2)
    P = np.vstack([X, q]) @ A.T + t
    assert halfspace_depth_fast(tuple(P[-1]), P[:-1]).contained == halfspace_depth_fast(q, X).contained


def test_slab_dominates_finite_betas(rng):
    for _ in range(20):
        q, X = random_instance(rng, 30)
        inf = skd_infinity(q, X).contained
        assert all(beta_skeleton_depth_decomposed(q, X, b).contained <= inf for b in BETAS)
