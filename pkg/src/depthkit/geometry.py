"""Exact planar predicates on fixed-point coordinates.

Coordinates are integers that count units of ``10**-decimals``; every
predicate below only adds and multiplies them, so results are exact.
Functions also accept :class:`fractions.Fraction` coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

Point = tuple  # tuple of int (or Fraction) coordinates

# int64 products are safe while every intermediate magnitude stays below this.
INT64_SAFE = 2**62


class DimensionError(ValueError):
    """Points of different dimension were mixed."""


class BetaError(ValueError):
    """An illegal beta parameter was supplied."""


def sign(value) -> int:
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class Beta:
    """Depth-family parameter, a rational >= 1 or infinity.

    ``Beta(None)`` is the infinity marker (slab regions).
    """

    value: Fraction | None

    def __post_init__(self):
        if self.value is not None:
            v = Fraction(self.value)
            if v < 1:
                raise BetaError(f"beta must be >= 1, got {v}")
            object.__setattr__(self, "value", v)

    @classmethod
    def infinity(cls) -> "Beta":
        return cls(None)

    @classmethod
    def of(cls, beta) -> "Beta":
        """Coerce ints, Fractions, strings ("3/2", "inf") and Betas."""
        if isinstance(beta, Beta):
            return beta
        if isinstance(beta, str):
            text = beta.strip().lower()
            if text in ("inf", "infinity", "oo", "∞"):
                return cls(None)
            try:
                value = Fraction(text)
            except (ValueError, ZeroDivisionError) as exc:
                raise BetaError(f"cannot parse beta {beta!r}") from exc
            return cls(value)
        if isinstance(beta, float):
            if math.isinf(beta) and beta > 0:
                return cls(None)
            raise BetaError("float beta is not exact; pass a Fraction or string")
        if isinstance(beta, Rational):
            return cls(Fraction(beta))
        raise BetaError(f"unsupported beta {beta!r}")

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    @property
    def num(self) -> int:
        return self.value.numerator

    @property
    def den(self) -> int:
        return self.value.denominator

    def __str__(self) -> str:
        return "inf" if self.value is None else str(self.value)


def _check_planar(*pts: Sequence) -> None:
    for p in pts:
        if len(p) != 2:
            raise DimensionError(f"planar point expected, got dimension {len(p)}")


def _check_same_dim(*pts: Sequence) -> int:
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise DimensionError(f"points of mixed dimension {sorted(dims)}")
    return dims.pop()


def sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def cross(u: Sequence, v: Sequence):
    return u[0] * v[1] - u[1] * v[0]


def orientation(a: Point, b: Point, c: Point) -> int:
    """Sign of det(b - a, c - a): +1 counterclockwise, -1 clockwise, 0 collinear."""
    _check_planar(a, b, c)
    return sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def dot_sign(u: Sequence, v: Sequence) -> int:
    _check_planar(u, v)
    return sign(u[0] * v[0] + u[1] * v[1])


def beta_region_contains(q: Point, xi: Point, xj: Point, beta) -> bool:
    """Closed beta-influence region membership, exact for rational beta.

    Uses ``|q-xj|^2 <= beta <q-xj, xi-xj>`` and the symmetric inequality,
    which expand the two-disk definition without square roots.  For
    infinite beta the region is the closed slab between the lines through
    ``xi`` and ``xj`` perpendicular to the segment.  A pair of coincident
    generators spans the single point ``{xi}``.
    """
    _check_same_dim(q, xi, xj)
    beta = Beta.of(beta)
    if tuple(xi) == tuple(xj):
        return tuple(q) == tuple(xi)
    if beta.is_infinite:
        t = dot(sub(q, xi), sub(xj, xi))
        return 0 <= t <= dot(sub(xj, xi), sub(xj, xi))
    p, r = beta.num, beta.den
    qj, qi = sub(q, xj), sub(q, xi)
    return (r * dot(qj, qj) <= p * dot(qj, sub(xi, xj))
            and r * dot(qi, qi) <= p * dot(qi, sub(xj, xi)))


def beta_region_contains_approx(q, xi, xj, beta: float, rtol: float = 1e-9) -> bool:
    """Floating membership test for irrational beta such as ``2 + sqrt(2)``.

    Compares the two squared distances to the disk centers with the squared
    radius, accepting points within ``rtol`` (relative to the squared
    radius) of the boundary.
    """
    q, xi, xj = (np.asarray(v, dtype=float) for v in (q, xi, xj))
    if math.isinf(beta):
        t = float(np.dot(q - xi, xj - xi))
        L = float(np.dot(xj - xi, xj - xi))
        return -rtol * L <= t <= L * (1 + rtol)
    ci = beta / 2 * xi + (1 - beta / 2) * xj
    cj = beta / 2 * xj + (1 - beta / 2) * xi
    r2 = (beta / 2) ** 2 * float(np.dot(xi - xj, xi - xj))
    worst = max(float(np.dot(q - ci, q - ci)), float(np.dot(q - cj, q - cj)))
    return worst <= r2 * (1 + rtol)


def on_segment(q: Point, a: Point, b: Point) -> bool:
    if orientation(a, b, q) != 0:
        return False
    return (min(a[0], b[0]) <= q[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= q[1] <= max(a[1], b[1]))


def triangle_contains(q: Point, a: Point, b: Point, c: Point) -> bool:
    """Closed triangle membership; collinear triangles reduce to segments."""
    o1, o2, o3 = orientation(a, b, q), orientation(b, c, q), orientation(c, a, q)
    if orientation(a, b, c) == 0:
        return on_segment(q, a, b) or on_segment(q, b, c) or on_segment(q, c, a)
    return (o1 >= 0 and o2 >= 0 and o3 >= 0) or (o1 <= 0 and o2 <= 0 and o3 <= 0)


# -- fixed-point datasets ---------------------------------------------------


def parse_fixed(text: str, decimals: int) -> int:
    """Parse a decimal string into an integer count of ``10**-decimals`` units."""
    try:
        d = Decimal(text.strip())
    except InvalidOperation as exc:
        raise ValueError(f"not a decimal number: {text!r}") from exc
    if not d.is_finite():
        raise ValueError(f"not a finite number: {text!r}")
    scaled = d.scaleb(decimals)
    if scaled != scaled.to_integral_value():
        raise ValueError(f"{text!r} has more than {decimals} decimals")
    return int(scaled)


def format_fixed(value: int, decimals: int) -> str:
    if decimals == 0:
        return str(value)
    s = "-" if value < 0 else ""
    whole, frac = divmod(abs(value), 10**decimals)
    return f"{s}{whole}.{frac:0{decimals}d}"


@dataclass(frozen=True)
class Dataset:
    """Points sharing one dimension and one fixed-point scale."""

    coords: np.ndarray  # (n, d) integer array
    decimals: int = 3

    def __post_init__(self):
        arr = as_int_array(self.coords)
        if arr.ndim != 2:
            raise DimensionError("dataset must be an (n, d) array")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @classmethod
    def from_values(cls, rows, decimals: int = 3) -> "Dataset":
        """Build from real-valued rows (strings, Decimals, ints, Fractions)."""
        out = []
        for row in rows:
            out.append([_to_fixed(v, decimals) for v in row])
        dims = {len(r) for r in out}
        if len(dims) > 1:
            raise DimensionError("rows of mixed arity")
        return cls(as_int_array(out), decimals)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def point(self, values) -> Point:
        """Convert a real-valued point to this dataset's scale."""
        p = tuple(_to_fixed(v, self.decimals) for v in values)
        if len(p) != self.dim:
            raise DimensionError(f"query has dimension {len(p)}, dataset {self.dim}")
        return p

    def compatible(self, other: "Dataset") -> None:
        if other.decimals != self.decimals:
            raise ValueError(
                f"mixed fixed-point scales 10^-{self.decimals} and 10^-{other.decimals}")
        if other.dim != self.dim:
            raise DimensionError(f"dimension {other.dim} vs {self.dim}")


def _to_fixed(v, decimals: int) -> int:
    if isinstance(v, str):
        return parse_fixed(v, decimals)
    f = Fraction(v) * 10**decimals if not isinstance(v, Decimal) else Fraction(v.scaleb(decimals))
    if f.denominator != 1:
        raise ValueError(f"{v!r} is not representable with {decimals} decimals")
    return f.numerator


def as_point(q) -> tuple:
    out = []
    for v in q:
        if isinstance(v, (int, np.integer)):
            out.append(int(v))
        elif isinstance(v, Fraction) and v.denominator == 1:
            out.append(v.numerator)
        else:
            raise TypeError(f"fixed-point coordinates must be integers, got {v!r}")
    return tuple(out)


def as_int_array(points) -> np.ndarray:
    """Integer array of coordinates: int64 when every value fits, else Python ints.

    Large big-integer inputs fall back to ``dtype=object`` so arithmetic
    stays exact instead of wrapping.  An object array that was widened on
    purpose is returned unchanged.
    """
    if isinstance(points, np.ndarray) and points.dtype.kind in "iu":
        return points.astype(np.int64, copy=False)
    if isinstance(points, np.ndarray) and points.dtype == object and points.ndim == 2:
        for v in points.ravel():
            if not isinstance(v, (int, np.integer)):
                raise TypeError(f"fixed-point coordinates must be integers, got {v!r}")
        return points
    arr = np.asarray(points, dtype=object)
    if arr.size == 0:
        return np.zeros(arr.shape if arr.ndim == 2 else (0, 2), dtype=np.int64)
    flat = arr.ravel()
    for v in flat:
        if not isinstance(v, (int, np.integer)):
            raise TypeError(f"fixed-point coordinates must be integers, got {v!r}")
    if max(abs(int(v)) for v in flat) < 2**62:
        return arr.astype(np.int64)
    return np.vectorize(int, otypes=[object])(arr)


def widen(arr: np.ndarray, bound: int) -> np.ndarray:
    """Return ``arr`` in a dtype where products up to ``bound`` cannot overflow."""
    if arr.dtype == object or bound < INT64_SAFE:
        return arr
    return arr.astype(object)


def max_abs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(np.max(np.abs(arr)))
