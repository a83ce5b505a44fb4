"""Brute-force depth functions.

Every routine here checks each region (pair, triangle, candidate halfplane)
separately, so it is slow but easy to audit.  The fast engines in
:mod:`depthkit.fast` are tested against these.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .geometry import Beta, DimensionError, as_int_array, as_point, max_abs, widen


@dataclass(frozen=True)
class DepthCount:
    """Unnormalized containment count plus its normalization.

    ``normalized`` is ``contained / denominator`` for the pair and triangle
    depths.  Halfspace depth uses the ``2/n`` factor instead, capped at 1.
    """

    contained: int
    denominator: int
    normalized: Fraction = field(default=None)

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        if self.normalized is None:
            object.__setattr__(self, "normalized", Fraction(self.contained, self.denominator))

    @classmethod
    def halfspace(cls, contained: int, n: int) -> "DepthCount":
        return cls(contained, n, min(Fraction(1), Fraction(2 * contained, n)))

    def same_count(self, other: "DepthCount") -> bool:
        return (self.contained, self.denominator) == (other.contained, other.denominator)


@dataclass(frozen=True)
class DepthPair:
    """Gabriel regions (``b_in``) and closed triangles (``s_in``) containing q."""

    b_in: frozenset
    s_in: frozenset


def _prepare(q, S, planar: bool):
    X = as_int_array(S)
    if X.ndim != 2:
        raise DimensionError("dataset must be an (n, d) array")
    q = as_point(q)
    if max(max_abs(X), max((abs(v) for v in q), default=0)) >= 2**61:
        X = X.astype(object)
    if X.shape[0] and X.shape[1] != len(q):
        raise DimensionError(f"query dimension {len(q)} != data dimension {X.shape[1]}")
    if planar and X.shape[0] and X.shape[1] != 2:
        raise DimensionError("planar dataset required")
    return np.asarray(q, dtype=X.dtype if X.dtype != object else object), X


def beta_skeleton_depth_bf(q, S, beta) -> DepthCount:
    """Count pairs whose closed beta-influence region contains ``q``; any dimension."""
    beta = Beta.of(beta)
    qv, X = _prepare(q, S, planar=False)
    n = X.shape[0]
    if n < 2:
        raise ValueError("beta-skeleton depth needs at least 2 points")
    i, j = np.triu_indices(n, 1)
    spread = 2 * max(max_abs(X), max_abs(qv)) + 1
    scale = 1 if beta.is_infinite else max(beta.num, beta.den)
    Xw = widen(X, 4 * X.shape[1] * spread * spread * scale)
    qv = qv.astype(Xw.dtype)
    A, B = Xw[i], Xw[j]
    same = np.all(A == B, axis=1)
    if beta.is_infinite:
        t = np.sum((qv - A) * (B - A), axis=1)
        inside = (t >= 0) & (t <= np.sum((B - A) ** 2, axis=1))
    else:
        p, r = beta.num, beta.den
        qa, qb = qv - A, qv - B
        inside = ((r * np.sum(qb * qb, axis=1) <= p * np.sum(qb * (A - B), axis=1))
                  & (r * np.sum(qa * qa, axis=1) <= p * np.sum(qa * (B - A), axis=1)))
    at_q = np.all(A == qv, axis=1)
    inside = np.where(same, at_q, inside)
    return DepthCount(int(np.count_nonzero(inside)), comb(n, 2))


def _orient(a, b, c):
    return np.sign((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
                   - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))


def _on_segment(q, a, b):
    col = _orient(a, b, q) == 0
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    return col & np.all((lo <= q) & (q <= hi), axis=1)


def _triangles_containing(qv, X):
    n = X.shape[0]
    idx = np.array(list(itertools.combinations(range(n), 3)), dtype=np.int64).reshape(-1, 3)
    Xw = widen(X, 8 * (2 * max(max_abs(X), max_abs(qv)) + 1) ** 2)
    Q = np.broadcast_to(qv.astype(Xw.dtype), (len(idx), 2))
    a, b, c = Xw[idx[:, 0]], Xw[idx[:, 1]], Xw[idx[:, 2]]
    o1, o2, o3 = _orient(a, b, Q), _orient(b, c, Q), _orient(c, a, Q)
    proper = ((o1 >= 0) & (o2 >= 0) & (o3 >= 0)) | ((o1 <= 0) & (o2 <= 0) & (o3 <= 0))
    flat = _orient(a, b, c) == 0
    seg = _on_segment(Q, a, b) | _on_segment(Q, b, c) | _on_segment(Q, c, a)
    return idx, np.where(flat, seg, proper)


def simplicial_depth_bf(q, S) -> DepthCount:
    """Count closed data triangles containing ``q`` (planar, O(n^3))."""
    qv, X = _prepare(q, S, planar=True)
    n = X.shape[0]
    if n < 3:
        raise ValueError("simplicial depth needs at least 3 points")
    _, inside = _triangles_containing(qv, X)
    return DepthCount(int(np.count_nonzero(inside)), comb(n, 3))


def exact_angle_key(x: int, y: int) -> tuple:
    """Key that sorts nonzero integer vectors by polar angle in [0, 2*pi)."""
    if y >= 0 and x > 0:
        return (0, Fraction(y, x + y))
    if x <= 0 and y > 0:
        return (1, Fraction(-x, y - x))
    if y <= 0 and x < 0:
        return (2, Fraction(-y, -x - y))
    return (3, Fraction(x, x - y))


def halfspace_candidate_directions(V) -> list:
    """Boundary directions covering every distinct closed-halfplane count.

    ``V`` holds nonzero translated vectors.  Returns each vector's direction,
    its negation, and one direction strictly inside each angular gap between
    consecutive directions of the symmetric set.
    """
    dirs = set()
    for x, y in V:
        x, y = int(x), int(y)
        g = math.gcd(x, y)
        dirs.add((x // g, y // g))
        dirs.add((-x // g, -y // g))
    ordered = sorted(dirs, key=lambda d: exact_angle_key(*d))
    cands = list(ordered)
    m = len(ordered)
    for k in range(m):
        u, v = ordered[k], ordered[(k + 1) % m]
        if u[0] * v[1] - u[1] * v[0] == 0:
            # antipodal neighbours: the gap is a half-turn
            cands.append((-u[1], u[0]))
        else:
            cands.append((u[0] + v[0], u[1] + v[1]))
    return cands


def halfspace_depth_bf(q, S) -> DepthCount:
    """Minimum number of points in a closed halfplane whose boundary passes through ``q``."""
    qv, X = _prepare(q, S, planar=True)
    n = X.shape[0]
    if n == 0:
        raise ValueError("halfspace depth of an empty dataset")
    V = [tuple(int(c) for c in row) for row in (X - qv)]
    nontrivial = [v for v in V if v != (0, 0)]
    if not nontrivial:
        return DepthCount.halfspace(n, n)
    D = as_int_array(halfspace_candidate_directions(nontrivial))
    bound = 4 * (max_abs(D) + 1) * (max_abs(X) + max_abs(qv) + 1)
    D = widen(D, bound)
    T = widen(as_int_array(V), bound).astype(D.dtype)
    cr = np.outer(D[:, 0], T[:, 1]) - np.outer(D[:, 1], T[:, 0])
    left = np.count_nonzero(cr >= 0, axis=1)
    right = np.count_nonzero(cr <= 0, axis=1)
    return DepthCount.halfspace(int(min(left.min(), right.min())), n)


def depth_pair_sets(q, S) -> DepthPair:
    """Explicit Gabriel-region and triangle sets containing ``q`` (beta = 1)."""
    qv, X = _prepare(q, S, planar=True)
    n = X.shape[0]
    if n < 3:
        raise ValueError("need at least 3 points")
    i, j = np.triu_indices(n, 1)
    Xw = widen(X, 8 * (2 * max(max_abs(X), max_abs(qv)) + 1) ** 2)
    qw = qv.astype(Xw.dtype)
    va, vb = Xw[i] - qw, Xw[j] - qw
    same = np.all(Xw[i] == Xw[j], axis=1)
    gab = np.where(same, np.all(va == 0, axis=1), np.sum(va * vb, axis=1) <= 0)
    b_in = frozenset(zip(i[gab].tolist(), j[gab].tolist()))
    idx, tri = _triangles_containing(qv, X)
    s_in = frozenset(tuple(t) for t in idx[tri].tolist())
    return DepthPair(b_in, s_in)
