"""CSV datasets, seeded random data, result records and depth dispatch."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import fast, oracles
from .geometry import Beta, BetaError, Dataset, DimensionError, format_fixed, parse_fixed

METHODS = ("halfspace", "simplicial", "spherical", "beta", "skd-inf")
ENGINES = ("oracle", "fast")


class DatasetParseError(ValueError):
    """A dataset or query file could not be parsed."""


def _is_number(token: str) -> bool:
    try:
        Decimal(token.strip())
    except ArithmeticError:
        return False
    return True


def parse_dataset(text: str, decimals: int = 3) -> Dataset:
    """Parse CSV text: one point per line, optional ``x,y,...`` header."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    if not rows:
        raise DatasetParseError("no data rows")
    arity = len(rows[0])
    coords = []
    for lineno, row in enumerate(rows, 1):
        if len(row) != arity:
            raise DatasetParseError(f"row {lineno}: expected {arity} fields, got {len(row)}")
        try:
            coords.append([parse_fixed(v, decimals) for v in row])
        except ValueError as exc:
            raise DatasetParseError(f"row {lineno}: {exc}") from exc
    return Dataset(coords, decimals)


def read_dataset(path, decimals: int = 3) -> Dataset:
    return parse_dataset(Path(path).read_text(), decimals)


def format_dataset(ds: Dataset, header: bool = True) -> str:
    names = ["x", "y", "z"] if ds.dim <= 3 else [f"x{i}" for i in range(ds.dim)]
    lines = [",".join(names[:ds.dim])] if header else []
    for row in ds.coords:
        lines.append(",".join(format_fixed(int(v), ds.decimals) for v in row))
    return "\n".join(lines) + "\n"


def write_dataset(path, ds: Dataset, header: bool = True) -> None:
    Path(path).write_text(format_dataset(ds, header))


def parse_point(text: str, decimals: int = 3) -> tuple:
    """Inline query such as ``"0.5,-1"``."""
    try:
        return tuple(parse_fixed(v, decimals) for v in text.split(","))
    except ValueError as exc:
        raise DatasetParseError(f"bad point {text!r}: {exc}") from exc


def generate_random(n: int, d: int = 2, seed: int = 0, low: int = -10, high: int = 10,
                    decimals: int = 3) -> Dataset:
    """Uniform integers on the ``10**-decimals`` grid inside ``[low, high]^d``."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    rng = np.random.default_rng(seed)
    u = 10**decimals
    return Dataset(rng.integers(low * u, high * u, size=(n, d), endpoint=True), decimals)


# -- exact decimals ----------------------------------------------------------


def decimal_string(value: Fraction, digits: int = 12) -> str:
    """Round ``value`` half-even to ``digits`` significant digits, fixed notation."""
    value = Fraction(value)
    if value == 0:
        return "0." + "0" * (digits - 1)
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_EVEN
        d = Decimal(value.numerator) / Decimal(value.denominator)
    places = digits - 1 - d.adjusted()
    return f"{d:.{max(places, 0)}f}"


@dataclass(frozen=True)
class ResultRecord:
    query: tuple
    method: str
    beta: str | None
    contained: int
    denominator: int
    normalized: Fraction
    elapsed_ns: int
    decimals: int = 3

    def as_dict(self) -> dict:
        return {
            "query": [format_fixed(v, self.decimals) for v in self.query],
            "method": self.method,
            "beta": self.beta,
            "contained": self.contained,
            "denominator": self.denominator,
            "fraction": f"{self.normalized.numerator}/{self.normalized.denominator}",
            "normalized": decimal_string(self.normalized),
            "elapsed_ns": self.elapsed_ns,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    CSV_FIELDS = ("query", "method", "beta", "contained", "denominator", "fraction",
                  "normalized", "elapsed_ns")

    def to_csv_row(self) -> list:
        d = self.as_dict()
        d["query"] = " ".join(d["query"])
        return [d[k] if d[k] is not None else "" for k in self.CSV_FIELDS]


# -- dispatch ----------------------------------------------------------------


def compute_depth(method: str, q, X, beta=None, engine: str = "fast",
                  backend: str = "angular") -> oracles.DepthCount:
    """One depth evaluation; ``beta`` is required exactly when ``method == "beta"``."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    if method == "beta":
        if beta is None:
            raise BetaError("method 'beta' requires a beta value")
        beta = Beta.of(beta)
    elif beta is not None and method != "skd-inf":
        raise BetaError(f"beta is only accepted with method 'beta', not {method!r}")
    if method == "skd-inf":
        beta = Beta.infinity()
    if method == "spherical":
        beta = Beta(1)
    X = np.asarray(X)
    if X.ndim == 2 and X.shape[0] and X.shape[1] != len(q):
        raise DimensionError(f"query dimension {len(q)} != data dimension {X.shape[1]}")
    if method == "halfspace":
        return (fast.halfspace_depth_fast if engine == "fast" else oracles.halfspace_depth_bf)(q, X)
    if method == "simplicial":
        # no sub-cubic simplicial engine; both engines share the oracle
        return oracles.simplicial_depth_bf(q, X)
    if engine == "oracle":
        return oracles.beta_skeleton_depth_bf(q, X, beta)
    if beta.is_infinite:
        return fast.skd_infinity(q, X)
    if beta.value == 1:
        return fast.spherical_depth_fast(q, X)
    return fast.beta_skeleton_depth_decomposed(q, X, beta, backend=backend)


def timed_record(method, q, X, beta=None, engine="fast", decimals=3) -> ResultRecord:
    t0 = time.perf_counter_ns()
    dc = compute_depth(method, q, X, beta, engine)
    elapsed = time.perf_counter_ns() - t0
    shown = None
    if method == "beta":
        shown = str(Beta.of(beta))
    elif method == "skd-inf":
        shown = "inf"
    return ResultRecord(tuple(int(v) for v in q), method, shown, dc.contained, dc.denominator,
                        dc.normalized, elapsed, decimals)


def depth_grid(ds: Dataset, method: str, box, resolution: int, beta=None,
               engine: str = "fast"):
    """Row-major ``(x, y, normalized)`` over a ``resolution x resolution`` grid.

    ``box`` is ``(xmin, ymin, xmax, ymax)`` in fixed-point units; grid nodes
    are rounded to the dataset grid.
    """
    xmin, ymin, xmax, ymax = box
    if xmin >= xmax or ymin >= ymax:
        raise ValueError("degenerate bounding box")
    if not 2 <= resolution <= 2000:
        raise ValueError("resolution must be within [2, 2000]")
    xs = [xmin + round(Fraction(k * (xmax - xmin), resolution - 1)) for k in range(resolution)]
    ys = [ymin + round(Fraction(k * (ymax - ymin), resolution - 1)) for k in range(resolution)]
    for y in ys:
        for x in xs:
            dc = compute_depth(method, (x, y), ds.coords, beta, engine)
            yield x, y, dc.normalized
