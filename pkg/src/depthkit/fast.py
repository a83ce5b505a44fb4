"""Angular-sweep depth engines for planar data.

All engines translate the query to the origin first.  Angular order is
resolved with exact half-plane and cross-product tests; float pseudo-angles
only accelerate sorting and binary search, and every float-derived position
is certified with the exact comparator (falling back to exact keys when the
certificate fails).
"""

from __future__ import annotations

import bisect
from math import comb

import numpy as np

from .geometry import Beta, BetaError, DimensionError, as_int_array, as_point, max_abs, widen
from .oracles import DepthCount, exact_angle_key

# Coordinates below this bound keep cross products inside int64.
_FAST_COORD_LIMIT = 2**30
# below this bound distinct directions get distinct float keys and equal
# directions identical ones, so the keys need no exact certification
_KEY_EXACT_LIMIT = 2**20


def translate(S, q) -> np.ndarray:
    """Shift every point by ``-q`` so the query sits at the origin."""
    X = as_int_array(S)
    q = as_point(q)
    if X.shape[0] and X.shape[1] != len(q):
        raise DimensionError(f"query dimension {len(q)} != data dimension {X.shape[1]}")
    if max(max_abs(X), max((abs(v) for v in q), default=0)) >= 2**61:
        X = X.astype(object)
    return X - np.asarray(q, dtype=X.dtype)


def _planar_translate(S, q):
    V = translate(S, q)
    if V.shape[0] and V.shape[1] != 2:
        raise DimensionError("planar dataset required")
    return V


def _bits(mask) -> np.ndarray:
    return np.asarray(mask, dtype=np.int8)


def _half(x, y) -> np.ndarray:
    """0 for polar angle in [0, pi), 1 for [pi, 2*pi)."""
    return 1 - _bits((y > 0) | ((y == 0) & (x > 0)))


def angle_cmp(ax, ay, bx, by) -> np.ndarray:
    """Exact sign of angle(a) - angle(b) for nonzero vectors, elementwise."""
    ha, hb = _half(ax, ay), _half(bx, by)
    c = ax * by - ay * bx
    return np.where(ha != hb, ha - hb, -np.sign(c))


def pseudo_angle(x, y) -> np.ndarray:
    """Float diamond angle in [0, 4), monotone in the polar angle."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = x / (np.abs(x) + np.abs(y))
    upper = (y > 0) | ((y == 0) & (x > 0))
    return np.where(upper, 1 - t, 3 + t)


def _tie_broken_order(keys, r2, idx):
    # quicksort on the keys, then (radius, index) order inside runs of equal keys
    order = np.argsort(keys)
    sk = keys[order]
    tie = np.flatnonzero(sk[1:] == sk[:-1])
    if tie.size:
        members = np.unique(np.concatenate([tie, tie + 1]))
        sub = order[members]
        order[members] = sub[np.lexsort((idx[sub], r2[sub], keys[sub]))]
    return order


class AngularIndex:
    """Nonzero planar vectors sorted by polar angle.

    Ties in angle are broken by squared radius, then by input position, so
    the order is deterministic.  ``count_closed_arc`` answers how many
    vectors have direction inside a closed counterclockwise arc.
    """

    def __init__(self, V, trivial: int = 0):
        V = as_int_array(V).reshape(-1, 2)
        self.trivial = trivial
        self.size = V.shape[0]
        self.bound = max_abs(V) if V.dtype != object else None
        self.exact_only = self.bound is None or self.bound >= _FAST_COORD_LIMIT
        idx = np.arange(self.size)
        r2 = V[:, 0] * V[:, 0] + V[:, 1] * V[:, 1]
        if not self.exact_only:
            keys = pseudo_angle(V[:, 0], V[:, 1])
            order = _tie_broken_order(keys, r2, idx)
            D = V[order]
            if self.size > 1 and self.bound >= _KEY_EXACT_LIMIT:
                c = angle_cmp(D[:-1, 0], D[:-1, 1], D[1:, 0], D[1:, 1])
                if np.any(c > 0):
                    self.exact_only = True
        if self.exact_only:
            order = np.array(sorted(range(self.size), key=lambda k: (
                exact_angle_key(int(V[k, 0]), int(V[k, 1])), int(r2[k]), k)), dtype=np.int64)
            D = V[order]
            keys = None
        self.order = order.reshape(-1)
        self.dirs = D.reshape(-1, 2)
        self.keys = None if keys is None else keys[self.order]
        self._exact_keys = None

    def _exact(self):
        if self._exact_keys is None:
            self._exact_keys = [exact_angle_key(int(x), int(y)) for x, y in self.dirs]
        return self._exact_keys

    def _positions(self, Q, side: str) -> np.ndarray:
        """Insertion points of query directions ``Q`` into the sorted order."""
        N = self.size
        Q = as_int_array(Q).reshape(-1, 2)
        if N == 0:
            return np.zeros(len(Q), dtype=np.int64)
        qbound = None if Q.dtype == object else max_abs(Q)
        if self.exact_only or qbound is None or qbound >= _FAST_COORD_LIMIT:
            ek = self._exact()
            fn = bisect.bisect_left if side == "left" else bisect.bisect_right
            return np.array([fn(ek, exact_angle_key(int(x), int(y))) for x, y in Q],
                            dtype=np.int64)
        qk = pseudo_angle(Q[:, 0], Q[:, 1])
        # sorted needles keep the binary searches cache-friendly; needles
        # built from the sorted directions need only a rotation
        drops = np.flatnonzero(qk[1:] < qk[:-1])
        if drops.size == 0:
            perm = np.arange(len(Q))
        elif drops.size == 1:
            perm = np.roll(np.arange(len(Q)), -int(drops[0]) - 1)
        else:
            perm = np.argsort(qk)
        pos = np.empty(len(Q), dtype=np.int64)
        pos[perm] = np.searchsorted(self.keys, qk[perm], side=side)
        if max(qbound, self.bound) < _KEY_EXACT_LIMIT:
            return pos
        D = self.dirs
        below = D[np.clip(pos - 1, 0, N - 1)]
        above = D[np.clip(pos, 0, N - 1)]
        cb = angle_cmp(below[:, 0], below[:, 1], Q[:, 0], Q[:, 1])
        ca = angle_cmp(above[:, 0], above[:, 1], Q[:, 0], Q[:, 1])
        if side == "left":
            ok = ((pos == 0) | (cb < 0)) & ((pos == N) | (ca >= 0))
        else:
            ok = ((pos == 0) | (cb <= 0)) & ((pos == N) | (ca > 0))
        bad = np.flatnonzero(~ok)
        if bad.size:
            ek = self._exact()
            fn = bisect.bisect_left if side == "left" else bisect.bisect_right
            for k in bad:
                pos[k] = fn(ek, exact_angle_key(int(Q[k, 0]), int(Q[k, 1])))
        return pos

    def count_closed_arc(self, start, end):
        """Vectors whose direction lies on the closed CCW arc ``start -> end``.

        Arcs are at most a half-turn; ``start == end`` selects one direction.
        Returns ``(counts, lo, hi)`` where the arc covers sorted positions
        ``lo..hi-1`` cyclically.
        """
        start = as_int_array(start).reshape(-1, 2)
        end = as_int_array(end).reshape(-1, 2)
        lo = self._positions(start, "left")
        hi = self._positions(end, "right")
        forward = angle_cmp(start[:, 0], start[:, 1], end[:, 0], end[:, 1]) <= 0
        counts = np.where(forward, hi - lo, self.size - lo + hi)
        return counts, lo, hi


def _split_trivial(V):
    zero = np.all(V == 0, axis=1) if V.shape[0] else np.zeros(0, dtype=bool)
    return V[~zero], int(np.count_nonzero(zero))


def _pairs_with_trivial(n: int, trivial: int) -> int:
    return comb(n, 2) - comb(n - trivial, 2)


def spherical_depth_fast(q, S) -> DepthCount:
    """Spherical (beta = 1) depth by angular sorting and binary search.

    A pair's Gabriel disk holds the origin exactly when the two translated
    vectors make an angle of at least a right angle, i.e. the partner lies on
    the closed half-turn arc opposite the vector.
    """
    V = _planar_translate(S, q)
    n = V.shape[0]
    if n < 2:
        raise ValueError("spherical depth needs at least 2 points")
    W, trivial = _split_trivial(V)
    total = 0
    if W.shape[0] and _exact_keys(W):
        total = _spherical_from_keys(W)
    elif W.shape[0]:
        index = AngularIndex(W, trivial)
        D = index.dirs
        start = np.stack([-D[:, 1], D[:, 0]], axis=1)
        counts, _, _ = index.count_closed_arc(start, -start)
        total = int(np.sum(counts))
    assert total % 2 == 0, "each pair is seen from both endpoints"
    return DepthCount(total // 2 + _pairs_with_trivial(n, trivial), comb(n, 2))


def _dedupe_sorted(D) -> np.ndarray:
    if len(D) < 2:
        return D
    same = angle_cmp(D[:-1, 0], D[:-1, 1], D[1:, 0], D[1:, 1]) == 0
    return D[np.concatenate([[True], ~same])]


def _both_orientations_sorted(index) -> np.ndarray:
    """Sorted directions of ``W`` and ``-W``, merged from the order of ``W``."""
    D = index.dirs

    def fallback():
        return AngularIndex(np.concatenate([D, -D])).dirs

    if index.exact_only or len(D) < 2:
        return fallback()
    N = -D
    nk = pseudo_angle(N[:, 0], N[:, 1])
    drops = np.flatnonzero(nk[1:] < nk[:-1])
    if drops.size > 1:
        return fallback()
    if drops.size:
        cut = int(drops[0]) + 1
        N, nk = np.roll(N, -cut, axis=0), np.roll(nk, -cut)
    # two sorted runs: the stable sort is a linear merge
    m = np.argsort(np.concatenate([index.keys, nk]), kind="stable")
    M = np.concatenate([D, N])[m]
    c = angle_cmp(M[:-1, 0], M[:-1, 1], M[1:, 0], M[1:, 1])
    return fallback() if np.any(c > 0) else M


def _exact_keys(W) -> bool:
    return W.dtype != object and max_abs(W) < _KEY_EXACT_LIMIT


def _sorted_keys(x, y) -> np.ndarray:
    return np.sort(pseudo_angle(x, y))


def _spherical_from_keys(W) -> int:
    # the per-vector arc counts hi - lo are only summed, so the lower and
    # upper endpoints can be sorted independently; no rows are gathered
    ks = _sorted_keys(W[:, 0], W[:, 1])
    sx, sy = -W[:, 1], W[:, 0]
    lo = np.searchsorted(ks, _sorted_keys(sx, sy), side="left")
    hi = np.searchsorted(ks, _sorted_keys(-sx, -sy), side="right")
    wraps = int(np.count_nonzero(_half(sx, sy)))
    return int(hi.sum()) - int(lo.sum()) + len(W) * wraps


def _halfspace_from_keys(W) -> int:
    # the directions of W and -W are centrally symmetric, so the antipode of
    # group g among the G distinct keys is g + G/2 and every arc is a
    # difference of cumulative counts
    N = len(W)
    ks = _sorted_keys(W[:, 0], W[:, 1])
    both = np.sort(np.concatenate([ks, _sorted_keys(-W[:, 0], -W[:, 1])]))
    U = both[np.concatenate([[True], both[1:] != both[:-1]])]
    G = len(U)
    cw = np.searchsorted(ks, U, side="right")
    ext = np.concatenate([cw, cw + N])
    k = np.arange(G)
    side = ext[k + G // 2] - ext[k]
    return int(min(side.min(), (N - side).min()))


def halfspace_depth_fast(q, S) -> DepthCount:
    """Tukey depth in O(n log n).

    Directions of the nontrivial points and their negations are sorted and
    deduplicated.  A line through the origin strictly inside the gap between
    consecutive directions ``P[k]`` and ``P[k+1]`` has the arc
    ``P[k+1] -> -P[k]`` on one side, so each candidate line costs two binary
    searches.  Points at the query are added to every count.
    """
    V = _planar_translate(S, q)
    n = V.shape[0]
    if n == 0:
        raise ValueError("halfspace depth of an empty dataset")
    W, trivial = _split_trivial(V)
    if W.shape[0] == 0:
        return DepthCount.halfspace(trivial, n)
    if _exact_keys(W):
        return DepthCount.halfspace(_halfspace_from_keys(W) + trivial, n)
    index = AngularIndex(W, trivial)
    A = _dedupe_sorted(_both_orientations_sorted(index))
    nxt = np.roll(A, -1, axis=0)
    side, _, _ = index.count_closed_arc(nxt, -A)
    best = int(min(side.min(), (index.size - side).min()))
    return DepthCount.halfspace(best + trivial, n)


# -- beta-skeleton depth by range counting ----------------------------------


class LinearScanBackend:
    """Range counts by scanning every translated point, O(n) per query."""

    def __init__(self, V):
        self.V = as_int_array(V).reshape(-1, 2)
        self.norm2 = self.V[:, 0] * self.V[:, 0] + self.V[:, 1] * self.V[:, 1]

    def _dots(self, a):
        return self.V[:, 0] * a[0] + self.V[:, 1] * a[1]

    def halfplane_count(self, a, beta: Beta) -> int:
        """Points b with beta*<a,b> <= (beta-1)*|a|^2 (closed, holds the origin)."""
        p, r = beta.num, beta.den
        lhs = p * self._dots(a)
        return int(np.count_nonzero(lhs <= (p - r) * (a[0] * a[0] + a[1] * a[1])))

    def open_disk_count(self, a, beta: Beta) -> int:
        """Points of the closed halfplane that are strictly inside the disk."""
        p, r = beta.num, beta.den
        lhs = p * self._dots(a)
        h = lhs <= (p - r) * (a[0] * a[0] + a[1] * a[1])
        return int(np.count_nonzero(h & (lhs > (p - r) * self.norm2)))


class AngularHalfplaneBackend(LinearScanBackend):
    """Angular index answering the through-origin part of each range.

    Points with ``<a,b> <= 0`` always lie in the halfplane and never in the
    open disk; they form a closed half-turn arc counted in O(log n).  Only
    the complementary open arc is scanned.
    """

    def __init__(self, V):
        super().__init__(V)
        self.index = AngularIndex(self.V)
        self.sorted_V = self.index.dirs
        self.sorted_norm2 = self.norm2[self.index.order]

    def _window(self, a):
        start = np.array([[-a[1], a[0]]], dtype=self.V.dtype)
        counts, lo, hi = self.index.count_closed_arc(start, -start)
        N = self.index.size
        # complement of the closed arc [lo, hi) is [hi, lo) cyclically
        h = int(hi[0]) % N
        rest = N - int(counts[0])
        take = (np.arange(rest) + h) % N if N else np.zeros(0, dtype=np.int64)
        return int(counts[0]), take

    def halfplane_count(self, a, beta: Beta) -> int:
        base, take = self._window(a)
        p, r = beta.num, beta.den
        B = self.sorted_V[take]
        lhs = p * (B[:, 0] * a[0] + B[:, 1] * a[1])
        return base + int(np.count_nonzero(lhs <= (p - r) * (a[0] * a[0] + a[1] * a[1])))

    def open_disk_count(self, a, beta: Beta) -> int:
        _, take = self._window(a)
        p, r = beta.num, beta.den
        B = self.sorted_V[take]
        lhs = p * (B[:, 0] * a[0] + B[:, 1] * a[1])
        h = lhs <= (p - r) * (a[0] * a[0] + a[1] * a[1])
        return int(np.count_nonzero(h & (lhs > (p - r) * self.sorted_norm2[take])))


BACKENDS = {"linear": LinearScanBackend, "angular": AngularHalfplaneBackend}


def beta_skeleton_depth_decomposed(q, S, beta, backend="linear") -> DepthCount:
    """Beta-skeleton depth for rational 1 < beta < inf via range counting.

    With the query at the origin, the region of pair (a, b) holds the origin
    iff ``b`` lies in the closed halfplane ``beta*<a,b> <= (beta-1)|a|^2``
    but not in the open disk ``beta*<a,b> > (beta-1)|b|^2``.  Summing over
    every ``a`` counts each pair twice.
    """
    beta = Beta.of(beta)
    if beta.is_infinite or beta.value <= 1:
        raise BetaError("decomposition needs 1 < beta < inf; use spherical_depth_fast or skd_infinity")
    V = _planar_translate(S, q)
    n = V.shape[0]
    if n < 2:
        raise ValueError("beta-skeleton depth needs at least 2 points")
    W, trivial = _split_trivial(V)
    W = widen(W, 4 * (max_abs(W) + 1) ** 2 * beta.num)
    if isinstance(backend, str):
        backend = BACKENDS[backend](W)
    total = 0
    for a in W:
        total += backend.halfplane_count(a, beta) - backend.open_disk_count(a, beta)
    assert total % 2 == 0
    return DepthCount(total // 2 + _pairs_with_trivial(n, trivial), comb(n, 2))


def skd_infinity(q, S, chunk: int = 512) -> DepthCount:
    """Slab (beta = inf) depth: pairs with <a,b> <= min(|a|^2, |b|^2) after translation."""
    V = _planar_translate(S, q)
    n = V.shape[0]
    if n < 2:
        raise ValueError("slab depth needs at least 2 points")
    W, trivial = _split_trivial(V)
    W = widen(W, 4 * (max_abs(W) + 1) ** 2)
    m = W.shape[0]
    norm2 = W[:, 0] * W[:, 0] + W[:, 1] * W[:, 1]
    total = 0
    for s in range(0, m, chunk):
        A = W[s:s + chunk]
        G = np.outer(A[:, 0], W[:, 0]) + np.outer(A[:, 1], W[:, 1])
        na = norm2[s:s + chunk]
        ok = (G <= na[:, None]) & (G <= norm2[None, :])
        # coincident nontrivial points span only themselves
        ok &= ~((G == na[:, None]) & (G == norm2[None, :]))
        total += int(np.count_nonzero(ok))
    assert total % 2 == 0
    return DepthCount(total // 2 + _pairs_with_trivial(n, trivial), comb(n, 2))
