"""Plane curves over F_{q^r} and their affine rational points."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import _kernels
from .errors import EnumerationBudgetExceeded, LineInCurve
from .field import FieldCtx, make_field, tower_field
from .poly import BiPoly, UniPoly

DEFAULT_BUDGET = 1 << 24


@dataclass(eq=False)
class PlaneCurve:
    F: BiPoly
    ctx: FieldCtx
    kind: str = "custom"
    q: int | None = None
    r: int | None = None
    genus: int | None = None
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.F.terms:
            raise ValueError("curve equation must be nonzero")
        if self.F.ctx != self.ctx:
            raise ValueError("equation and curve live over different fields")

    @property
    def total_degree(self) -> int:
        return self.F.total_degree

    @property
    def second_degree(self) -> int:
        return self.F.second_degree

    @property
    def is_norm_trace(self) -> bool:
        return self.kind == "norm-trace"

    @property
    def line_degree(self) -> int:
        """Upper bound on deg m_{alpha,beta}."""
        return self.total_degree

    def to_spec(self) -> dict:
        if self.is_norm_trace:
            return {"kind": "norm-trace", "q": self.q, "r": self.r}
        spec = {"kind": "custom",
                "field": self.ctx.to_spec(),
                "terms": [{"a": a, "b": b, "coeff": c} for (a, b), c in self.F.terms.items()]}
        if self.genus is not None:
            spec["genus"] = self.genus
        if self.name:
            spec["name"] = self.name
        return spec

    @classmethod
    def from_spec(cls, spec: dict, ctx: FieldCtx | None = None) -> "PlaneCurve":
        if spec["kind"] == "norm-trace":
            return norm_trace_curve(spec["q"], spec["r"])
        if spec["kind"] == "schmidt":
            return schmidt_curve()
        if "field" in spec:
            ctx = FieldCtx.from_spec(spec["field"])
        if ctx is None:
            raise ValueError("custom curve spec needs a field (in the spec or from the caller)")
        terms = {(t["a"], t["b"]): t["coeff"] for t in spec["terms"]}
        return custom_curve(ctx, terms, genus=spec.get("genus"), name=spec.get("name", ""))


def norm_trace_curve(q: int, r: int) -> PlaneCurve:
    """X_{q,r}: x^N - sum_i y^{q^i} = 0 over F_{q^r}, N = (q^r - 1)/(q - 1)."""
    ctx = tower_field(q, r)
    N = (q ** r - 1) // (q - 1)
    minus_one = ctx.neg(1)
    terms = {(N, 0): 1}
    for i in range(r):
        terms[(0, q ** i)] = minus_one
    genus = (N - 1) * (q ** (r - 1) - 1) // 2
    return PlaneCurve(BiPoly(ctx, terms), ctx, "norm-trace", q, r, genus, f"X_{{{q},{r}}}")


def hermitian_curve(q: int) -> PlaneCurve:
    return norm_trace_curve(q, 2)


def custom_curve(ctx: FieldCtx, terms: dict, genus: int | None = None, name: str = "") -> PlaneCurve:
    return PlaneCurve(BiPoly(ctx, terms), ctx, "custom", genus=genus, name=name)


def schmidt_curve() -> PlaneCurve:
    """y^8 + y = x^3 over F_64."""
    ctx = make_field(2, 6)
    return custom_curve(ctx, {(0, 8): 1, (0, 1): 1, (3, 0): 1}, genus=7, name="schmidt")


class PointSet:
    """Affine rational points in canonical order (x major, y minor)."""

    def __init__(self, ctx: FieldCtx, xs: np.ndarray, ys: np.ndarray):
        self.ctx = ctx
        self.xs = np.ascontiguousarray(xs, dtype=np.int64)
        self.ys = np.ascontiguousarray(ys, dtype=np.int64)
        self._keys = self.xs * ctx.order + self.ys

    def __len__(self) -> int:
        return len(self.xs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return zip(self.xs.tolist(), self.ys.tolist())

    def __getitem__(self, i: int) -> tuple[int, int]:
        return int(self.xs[i]), int(self.ys[i])

    def index_arr(self, xs, ys) -> np.ndarray:
        """Positions of the given points, -1 where absent."""
        keys = np.asarray(xs, dtype=np.int64) * self.ctx.order + np.asarray(ys, dtype=np.int64)
        pos = np.searchsorted(self._keys, keys)
        pos = np.minimum(pos, len(self._keys) - 1)
        return np.where(self._keys[pos] == keys, pos, -1)

    def index(self, x: int, y: int) -> int:
        return int(self.index_arr([int(x)], [int(y)])[0])

    def __contains__(self, pt) -> bool:
        return self.index(*pt) >= 0

    def as_list(self) -> list[list[int]]:
        return [[x, y] for x, y in self]


def enumerate_affine_points(curve: PlaneCurve, budget: int = DEFAULT_BUDGET) -> PointSet:
    if "points" in curve._cache:
        return curve._cache["points"]
    ctx = curve.ctx
    Q = ctx.order
    if Q * Q > budget:
        raise EnumerationBudgetExceeded(f"{Q}^2 candidate pairs exceed budget {budget}")
    if curve.is_norm_trace:
        tr = ctx.trace_table()
        nm = ctx.norm_table()
        fibres = {int(t): np.flatnonzero(tr == t) for t in np.unique(tr)}
        xs, ys = [], []
        for x in range(Q):
            f = fibres[int(nm[x])]
            xs.append(np.full(len(f), x, dtype=np.int64))
            ys.append(f)
        pts = PointSet(ctx, np.concatenate(xs), np.concatenate(ys))
    elif ctx.has_tables:
        tx, ty, tc = curve.F.arrays()
        mask = _kernels.curve_zero_mask(tx, ty, tc, ctx.ktab)
        xs, ys = np.nonzero(mask)
        pts = PointSet(ctx, xs, ys)
    else:
        found = [(x, y) for x in range(Q) for y in range(Q) if curve.F(x, y).value == 0]
        pts = PointSet(ctx, np.array([p[0] for p in found]), np.array([p[1] for p in found]))
    curve._cache["points"] = pts
    return pts


def restrict_to_line(curve: PlaneCurve, alpha, beta) -> UniPoly:
    """m_{alpha,beta}(x) = F(x, alpha x + beta)."""
    ctx = curve.ctx
    a, b = int(alpha), int(beta)
    if ctx.has_tables:
        tx, ty, tc = curve.F.arrays()
        arr = _kernels.line_poly(tx, ty, tc, a, b, ctx.ktab, curve.line_degree)
        return UniPoly(ctx, arr.tolist())
    return curve.F.on_line(a, b)


def line_poly_array(curve: PlaneCurve, alpha: int, beta: int) -> np.ndarray:
    tx, ty, tc = curve.F.arrays()
    m = _kernels.line_poly(tx, ty, tc, int(alpha), int(beta), curve.ctx.ktab, curve.line_degree)
    if _kernels.pdeg(m) < 0:
        raise LineInCurve(f"line ({alpha}, {beta}) is a component of {curve.name or 'the curve'}")
    return m
