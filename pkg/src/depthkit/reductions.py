"""Element-uniqueness instances with closed-form depth at the origin.

Each builder turns a list of positive fixed-point values into a planar
dataset whose depth at ``(0, 0)`` is known in closed form when the values
are distinct, and moves by a known amount for every duplicated pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt

import numpy as np

from .geometry import Beta, BetaError, as_int_array

KINDS = ("spherical", "lens", "slab")
# default denominators of the two nearby rational rotations
ROTATION_SCALES = (10**9, 10**9 + 7)


@dataclass(frozen=True)
class ReductionInstance:
    kind: str
    inputs: tuple  # fixed-point integers
    points: np.ndarray
    beta: Beta
    decimals: int = 3
    duplicates: tuple = ()  # (i, j) index pairs with inputs[j] == inputs[i]
    query: tuple = (0, 0)

    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def c(self) -> int:
        return len(self.duplicates)


@dataclass(frozen=True)
class Expected:
    value: int
    exact: bool  # False means ``value`` is only a lower bound

    def check(self, count: int) -> bool:
        return count == self.value if self.exact else count >= self.value


def shift_positive(values, decimals: int = 3) -> list:
    """Translate values so the smallest becomes one unit (``10**-decimals``)."""
    values = [int(v) for v in values]
    low = min(values)
    return values if low > 0 else [v - low + 1 for v in values]


def _validate(values, need: int = 2) -> tuple:
    vals = tuple(int(v) for v in values)
    if len(vals) < need:
        raise ValueError(f"need at least {need} inputs, got {len(vals)}")
    if any(v <= 0 for v in vals):
        raise ValueError("inputs must be positive; see shift_positive")
    return vals


def _duplicate_pairs(values) -> tuple:
    first = {}
    pairs = []
    for j, v in enumerate(values):
        if v in first:
            pairs.append((first[v], j))
        else:
            first[v] = j
    return tuple(pairs)


def inject_duplicates(values, c: int, rng: np.random.Generator):
    """Copy ``b_i`` over ``b_j`` for ``c`` disjoint random index pairs.

    Returns the new list and the ``(i, j)`` pairs.  Needs ``2c <= n`` and
    distinct input values, so each copy adds exactly one duplicate pair.
    """
    values = list(values)
    if len(set(values)) != len(values):
        raise ValueError("inputs already contain duplicates")
    if 2 * c > len(values):
        raise ValueError(f"cannot place {c} disjoint duplicate pairs among {len(values)} inputs")
    idx = rng.permutation(len(values))[:2 * c]
    pairs = []
    for k in range(c):
        i, j = sorted((int(idx[2 * k]), int(idx[2 * k + 1])))
        values[j] = values[i]
        pairs.append((i, j))
    return values, tuple(sorted(pairs))


def build_spherical_instance(A, decimals: int = 3) -> ReductionInstance:
    """Points ``(a, 1), (-1, a), (-a, -1), (1, -a)`` for every ``a`` in ``A``."""
    A = _validate(A)
    u = 10**decimals
    pts = []
    for rot in range(4):
        for a in A:
            x, y = a, u
            for _ in range(rot):
                x, y = -y, x
            pts.append((x, y))
    return ReductionInstance("spherical", A, as_int_array(pts), Beta(1), decimals,
                             _duplicate_pairs(A))


def rational_rotation(beta, scale: int = ROTATION_SCALES[0]) -> tuple:
    """Integers ``(k, m)`` whose rotation ``((k^2-m^2), 2mk) / (k^2+m^2)`` slightly
    overshoots the angle ``acos(1 - 1/beta)``.

    Uses ``tan(theta/2) = sqrt(r / (2p - r))`` for ``beta = p/r`` and rounds
    ``m/k`` up at resolution about ``1/scale``.
    """
    beta = Beta.of(beta)
    if beta.is_infinite or beta.value <= 1:
        raise BetaError("lens-family instances need 1 < beta < inf")
    p, r = beta.num, beta.den
    k = (2 * p - r) * scale
    m = isqrt(r * (2 * p - r) * scale * scale) + 1
    return k, m


def build_lens_family_instance(B, beta, decimals: int = 3,
                               scale: int = ROTATION_SCALES[0]) -> ReductionInstance:
    """Points ``b`` on the x-axis plus the same points rotated by about
    ``acos(1 - 1/beta)``.

    The rotation is rational, so every coordinate is an exact integer; the
    whole set is scaled by ``k^2 + m^2`` which leaves every depth unchanged.
    """
    B = _validate(B)
    beta = Beta.of(beta)
    k, m = rational_rotation(beta, scale)
    h, cx, sy = k * k + m * m, k * k - m * m, 2 * m * k
    pts = [(b * h, 0) for b in B] + [(b * cx, b * sy) for b in B]
    return ReductionInstance("lens", B, as_int_array(pts), beta, decimals, _duplicate_pairs(B))


def build_slab_instance(B, decimals: int = 3) -> ReductionInstance:
    """Points ``(b, 0)`` and ``(b, max B)``."""
    B = _validate(B)
    top = max(B)
    pts = [(b, 0) for b in B] + [(b, top) for b in B]
    return ReductionInstance("slab", B, as_int_array(pts), Beta.infinity(), decimals,
                             _duplicate_pairs(B))


def expected_count(kind: str, n: int, c: int = 0) -> Expected:
    """Closed-form unnormalized depth of the origin for ``n`` inputs with ``c`` duplicate pairs."""
    if n < 2 or c < 0:
        raise ValueError("need n >= 2 and c >= 0")
    if kind == "spherical":
        return Expected(4 * n * n + 2 * n, True) if c == 0 else Expected(4 * n * n + 2 * n + 4, False)
    if kind == "lens":
        return Expected(n + 2 * c, True)
    if kind == "slab":
        return Expected(comb(n + 1, 2) + 2 * c, True)
    raise ValueError(f"unknown reduction kind {kind!r}")


def slab_count_derived(n: int, c: int = 0) -> int:
    """Slab count actually attained by :func:`build_slab_instance`.

    A duplicated value adds one region: both cross pairs of the doubled
    column hold the origin on their boundary, while the column's two
    degenerate pairs only span their own point.
    """
    if n < 2 or c < 0:
        raise ValueError("need n >= 2 and c >= 0")
    return comb(n + 1, 2) + c


def build_instance(kind: str, values, beta=None, decimals: int = 3, **kw) -> ReductionInstance:
    if kind == "spherical":
        return build_spherical_instance(values, decimals)
    if kind == "lens":
        return build_lens_family_instance(values, Fraction(2) if beta is None else beta, decimals, **kw)
    if kind == "slab":
        return build_slab_instance(values, decimals)
    raise ValueError(f"unknown reduction kind {kind!r}")
