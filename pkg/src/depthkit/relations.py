"""Relationships between depth functions and model fitting between them.

Covers the per-pair beta thresholds at which a beta-influence region
swallows the query, the two dissimilarity measures (``d_E`` from a fitted
model and the poset distance ``d_c``), deterministic least-squares fits of
three model shapes, and AIC/BIC model selection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import least_squares

from .geometry import as_int_array, as_point

INFINITY = math.inf
MODEL_KINDS = ("linear", "quadratic", "power")
_PARAM_COUNT = {"linear": 2, "quadratic": 2, "power": 2}
_GOLDEN = (math.sqrt(5) - 1) / 2


class NonGenericQuery(ValueError):
    """The query lies on the boundary of some pair's slab."""

    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


# -- dissimilarities -------------------------------------------------------


def r_squared(U, fitted) -> float:
    """Coefficient of determination; negative when the fit is worse than the mean."""
    U = np.asarray(U, dtype=float)
    fitted = np.asarray(fitted, dtype=float)
    if U.shape != fitted.shape or U.size < 2:
        raise ValueError("need two equal-length vectors with at least 2 entries")
    xi = U - U.mean()
    ss_tot = float(np.dot(xi, xi))
    if ss_tot == 0:
        raise ValueError("r^2 is undefined for a constant vector")
    delta = U - fitted
    return 1.0 - float(np.dot(delta, delta)) / ss_tot


def d_E(U, V, model: "FitReport") -> float:
    """``1 - r^2`` of ``model`` (fitted to map ``V`` onto ``U``), clamped to [0, 1]."""
    r2 = r_squared(U, model.predict(V))
    return min(1.0, max(0.0, 1.0 - r2))


def poset_matrix(depths) -> np.ndarray:
    """``M[i, j]`` is true iff ``depths[i] <= depths[j]``; ties set both cells."""
    d = np.asarray(depths)
    return np.less_equal.outer(d, d)


def d_c(depthsF, depthsG) -> Fraction:
    """Normalized Hamming distance between the two induced poset matrices."""
    F, G = np.asarray(depthsF), np.asarray(depthsG)
    if F.shape != G.shape or F.ndim != 1:
        raise ValueError("depth vectors must be 1-d and of equal length")
    n = F.size
    if n < 2:
        raise ValueError("d_c needs at least 2 points")
    diff = np.count_nonzero(poset_matrix(F) != poset_matrix(G))
    return Fraction(int(diff), n * n - n)


# -- fitting ---------------------------------------------------------------


@dataclass
class FitReport:
    kind: str
    params: dict
    residuals: np.ndarray
    sse: float
    r2: float
    d_E: float
    loglik: float
    aic: float
    bic: float
    d_c: Fraction | None = field(default=None)

    def predict(self, x) -> np.ndarray:
        return predict(self.kind, self.params, x)

    def formula(self) -> str:
        p = self.params
        if self.kind == "linear":
            return f"{p['a']:.4f}x{p['b']:+.4f}"
        if self.kind == "quadratic":
            return f"{p['a']:.4f}(x{-p['b']:+.4f})^2"
        return f"(x{p['b']:+.4f})^{p['c']:.4f}"


def predict(kind: str, params: dict, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if kind == "linear":
        return params["a"] * x + params["b"]
    if kind == "quadratic":
        return params["a"] * (x - params["b"]) ** 2
    if kind == "power":
        return (x + params["b"]) ** params["c"]
    raise ValueError(f"unknown model kind {kind!r}")


def information_criteria(report: FitReport, n: int) -> dict:
    """Gaussian-likelihood AIC and BIC; an exact fit gives ``-inf`` for both."""
    k = _PARAM_COUNT[report.kind]
    if report.sse <= 0:
        return {"loglik": math.inf, "AIC": -math.inf, "BIC": -math.inf}
    ll = -(n / 2) * (math.log(2 * math.pi * report.sse / n) + 1)
    return {"loglik": ll, "AIC": -2 * ll + 2 * k, "BIC": -2 * ll + k * math.log(n)}


def _golden_min(f, lo, hi, tol=1e-10, max_iter=200):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) < tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _search_interval(x):
    span = float(x.max() - x.min()) or 1.0
    return float(x.min()) - span, float(x.max()) + span


def _fit_linear(x, y):
    A = np.column_stack([x, np.ones_like(x)])
    (a, b), *_ = np.linalg.lstsq(A, y, rcond=None)
    return {"a": float(a), "b": float(b)}


def _quadratic_inner(x, y, b):
    z = (x - b) ** 2
    zz = float(np.dot(z, z))
    a = float(np.dot(z, y)) / zz if zz > 0 else 0.0
    r = y - a * z
    return a, float(np.dot(r, r))


def _fit_quadratic(x, y):
    lo, hi = _search_interval(x)
    grid = np.linspace(lo, hi, 201)
    sse = [_quadratic_inner(x, y, b)[1] for b in grid]
    k = int(np.argmin(sse))
    # bracket the best grid cell, then refine
    left, right = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    b, _ = _golden_min(lambda t: _quadratic_inner(x, y, t)[1], left, right)
    a, _ = _quadratic_inner(x, y, b)
    return {"a": a, "b": float(b)}


def _power_sse(x, y, b, c):
    base = x + b
    if np.any(base <= 0):
        return math.inf
    with np.errstate(over="ignore", invalid="ignore"):
        r = y - base ** c
    val = float(np.dot(r, r))
    return val if math.isfinite(val) else math.inf


def _fit_power(x, y):
    lo, hi = _search_interval(x)
    lo = max(lo, -float(x.min()))
    bs = np.linspace(lo, hi, 201)[1:] if lo == -float(x.min()) else np.linspace(lo, hi, 201)
    cs = np.linspace(0.5, 12.0, 101)
    best = (math.inf, None, None)
    for b in bs:
        for c in cs:
            s = _power_sse(x, y, b, c)
            if s < best[0]:
                best = (s, float(b), float(c))
    if best[1] is None:
        raise ValueError("power model: x + b <= 0 for every candidate b")
    sse, b, c = best
    db, dc = (hi - lo) / 200, 11.5 / 100
    for _ in range(200):
        b_old, c_old = b, c
        b, _ = _golden_min(lambda t: _power_sse(x, y, t, c), max(b - db, lo), b + db)
        c, sse = _golden_min(lambda t: _power_sse(x, y, b, t), max(c - dc, 1e-9), c + dc)
        if abs(b - b_old) < 1e-10 and abs(c - c_old) < 1e-10:
            break
    # coordinate descent crawls along the b/c valley; finish with a
    # trust-region Gauss-Newton step from the same start (deterministic)
    floor = -float(x.min()) + 1e-12

    def resid(p):
        return y - np.maximum(x + p[0], 1e-300) ** p[1]

    sol = least_squares(resid, [max(b, floor + 1e-9), c], bounds=([floor, 1e-9], [np.inf, np.inf]),
                        xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
    if _power_sse(x, y, *sol.x) <= sse:
        b, c = float(sol.x[0]), float(sol.x[1])
    return {"b": b, "c": c}


_FITTERS = {"linear": _fit_linear, "quadratic": _fit_quadratic, "power": _fit_power}


def fit_model(kind: str, x, y) -> FitReport:
    """Deterministic least-squares fit of ``y`` against ``x`` for one model shape."""
    if kind not in _FITTERS:
        raise ValueError(f"unknown model kind {kind!r}; choose from {MODEL_KINDS}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d and of equal length")
    if x.size < _PARAM_COUNT[kind] + 1:
        raise ValueError(f"{kind} fit needs at least {_PARAM_COUNT[kind] + 1} points")
    params = _FITTERS[kind](x, y)
    fitted = predict(kind, params, x)
    residuals = y - fitted
    sse = float(np.dot(residuals, residuals))
    try:
        r2 = r_squared(y, fitted)
    except ValueError:
        r2 = 1.0 if sse == 0 else -math.inf
    report = FitReport(kind, params, residuals, sse, r2, min(1.0, max(0.0, 1.0 - r2)),
                       math.nan, math.nan, math.nan)
    ic = information_criteria(report, x.size)
    report.loglik, report.aic, report.bic = ic["loglik"], ic["AIC"], ic["BIC"]
    return report


def approximate_depth(xDepths, yDepths, kinds=MODEL_KINDS) -> tuple:
    """Fit every model in ``kinds`` mapping x-depths to y-depths.

    Returns ``(best, reports)`` where ``best`` minimizes AIC; each report
    carries ``d_c`` between the two depth vectors, which no fit can change.
    """
    if not kinds:
        raise ValueError("no model kinds requested")
    dc = d_c(xDepths, yDepths)
    reports = []
    for kind in kinds:
        rep = fit_model(kind, xDepths, yDepths)
        rep.d_c = dc
        reports.append(rep)
    best = min(reports, key=lambda r: (r.aic, MODEL_KINDS.index(r.kind)))
    return best, reports


# -- beta thresholds -------------------------------------------------------


def pair_beta_threshold(q, a, b):
    """Smallest beta >= 1 whose closed region for pair (a, b) contains ``q``.

    Returns a Fraction, or ``math.inf`` when ``q`` sits on the slab boundary
    away from the generators.  Raises ValueError if ``q`` is outside the
    closed slab, since no beta works then.
    """
    q, a, b = as_point(q), as_point(a), as_point(b)
    if a == b:
        raise ValueError("pair generators must differ")
    if q == a or q == b:
        return Fraction(1)
    out = Fraction(1)
    for u, v in ((b, a), (a, b)):
        qu = (q[0] - u[0], q[1] - u[1])
        den = qu[0] * (v[0] - u[0]) + qu[1] * (v[1] - u[1])
        if den < 0:
            raise ValueError(f"query {q} lies outside the slab of {a}, {b}")
        if den == 0:
            return INFINITY
        out = max(out, Fraction(qu[0] ** 2 + qu[1] ** 2, den))
    return out


def _in_closed_slab(q, a, b) -> bool:
    t = (q[0] - a[0]) * (b[0] - a[0]) + (q[1] - a[1]) * (b[1] - a[1])
    return 0 <= t <= (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2


def beta_star(q, S):
    """Max of the pair thresholds over pairs whose closed slab contains ``q``.

    Raises :class:`NonGenericQuery` naming the offending pair when ``q`` is
    on a slab boundary, where no finite beta reaches the slab count.  A
    query on a data segment is harmless here: that pair's threshold is 1.
    """
    q = as_point(q)
    X = as_int_array(S)
    pts = [tuple(int(v) for v in row) for row in X]
    best = Fraction(1)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            a, b = pts[i], pts[j]
            if a == b:
                continue
            if not _in_closed_slab(q, a, b):
                continue
            t = pair_beta_threshold(q, a, b)
            if t == INFINITY:
                raise NonGenericQuery(f"query lies on the slab boundary of pair {(i, j)}", (i, j))
            best = max(best, t)
    return best
