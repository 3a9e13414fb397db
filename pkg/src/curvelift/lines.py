"""Lines y = alpha*x + beta, line families, and intersection numbers with a curve."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import total_ordering

import numpy as np

from . import _kernels
from .curves import PlaneCurve, enumerate_affine_points, restrict_to_line
from .errors import ClassReductionUnsound, LineInCurve, PointNotOnCurve
from .field import FieldCtx

SELECTORS = ("all", "trace-nonzero", "trace-zero", "explicit")


@total_ordering
@dataclass(frozen=True)
class Line:
    alpha: int
    beta: int

    def __post_init__(self):
        if int(self.alpha) == 0:
            raise ValueError("horizontal lines (alpha = 0) are not in the family")
        object.__setattr__(self, "alpha", int(self.alpha))
        object.__setattr__(self, "beta", int(self.beta))

    def __lt__(self, o: "Line"):
        return (self.alpha, self.beta) < (o.alpha, o.beta)

    def y(self, ctx: FieldCtx, x: int) -> int:
        return ctx.add(ctx.mul(self.alpha, x), self.beta)


class LineFamily:
    """A named set of non-horizontal lines, resolved lazily against a field."""

    def __init__(self, selector: str = "all", lines=None):
        if selector not in SELECTORS:
            raise ValueError(f"unknown line selector {selector!r}")
        self.selector = selector
        self._keys = None
        self._pairs = None
        if selector == "explicit":
            if lines is None:
                raise ValueError("explicit family needs a line list")
            pairs = sorted({(int(a), int(b)) for a, b in lines})
            if any(a == 0 for a, _ in pairs):
                raise ValueError("horizontal lines (alpha = 0) are not in the family")
            self._pairs = np.array(pairs, dtype=np.int64).reshape(-1, 2)

    @classmethod
    def explicit(cls, lines) -> "LineFamily":
        return cls("explicit", [(L.alpha, L.beta) if isinstance(L, Line) else L for L in lines])

    def __eq__(self, o):
        if not isinstance(o, LineFamily) or o.selector != self.selector:
            return False
        return self.selector != "explicit" or np.array_equal(self._pairs, o._pairs)

    def __repr__(self):
        if self.selector == "explicit":
            return f"LineFamily(explicit, {len(self._pairs)} lines)"
        return f"LineFamily({self.selector})"

    def contains_arr(self, ctx: FieldCtx, alphas, betas) -> np.ndarray:
        alphas = np.asarray(alphas, dtype=np.int64)
        betas = np.asarray(betas, dtype=np.int64)
        ok = alphas != 0
        if self.selector == "all":
            return ok
        if self.selector == "explicit":
            keys = self._pairs[:, 0] * ctx.order + self._pairs[:, 1]
            return ok & np.isin(alphas * ctx.order + betas, keys)
        tr = ctx.trace_table()[betas]
        return ok & ((tr == 0) if self.selector == "trace-zero" else (tr != 0))

    def __contains__(self, item) -> bool:
        # only meaningful for explicit families without a field at hand
        a, b = (item.alpha, item.beta) if isinstance(item, Line) else item
        if self.selector != "explicit":
            raise TypeError("use contains_arr(ctx, ...) for selector families")
        return bool(((self._pairs[:, 0] == a) & (self._pairs[:, 1] == b)).any())

    def arrays(self, ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray]:
        """(alphas, betas) of every family line, sorted canonically."""
        if self.selector == "explicit":
            return self._pairs[:, 0].copy(), self._pairs[:, 1].copy()
        Q = ctx.order
        al = np.repeat(np.arange(1, Q, dtype=np.int64), Q)
        be = np.tile(np.arange(Q, dtype=np.int64), Q - 1)
        keep = self.contains_arr(ctx, al, be)
        return al[keep], be[keep]

    def resolve(self, ctx: FieldCtx) -> list[Line]:
        al, be = self.arrays(ctx)
        return [Line(a, b) for a, b in zip(al.tolist(), be.tolist())]

    def size(self, ctx: FieldCtx) -> int:
        if self.selector == "explicit":
            return len(self._pairs)
        if self.selector == "all":
            return (ctx.order - 1) * ctx.order
        nz = int(np.count_nonzero(ctx.trace_table()))
        z = ctx.order - nz
        return (ctx.order - 1) * (z if self.selector == "trace-zero" else nz)

    def is_explicit(self) -> bool:
        return self.selector == "explicit"

    def to_spec(self):
        if self.selector == "explicit":
            return {"selector": "explicit", "lines": self._pairs.tolist()}
        return {"selector": self.selector}

    @classmethod
    def from_spec(cls, spec) -> "LineFamily":
        if isinstance(spec, str):
            return cls(spec)
        if isinstance(spec, list):
            return cls("explicit", spec)
        return cls(spec["selector"], spec.get("lines"))


@dataclass(frozen=True)
class IntersectionRecord:
    norm_class: int
    trace_class: int
    count: int
    lines_in_class: int


# -- single lines --------------------------------------------------------------

def _steps(ctx: FieldCtx) -> int:
    return ctx.m


def intersection_count(curve: PlaneCurve, L: Line | tuple, method: str = "gcd") -> int:
    """Number of distinct x0 in the field with F(x0, alpha x0 + beta) = 0."""
    a, b = (L.alpha, L.beta) if isinstance(L, Line) else (int(L[0]), int(L[1]))
    if a == 0:
        raise ValueError("horizontal lines (alpha = 0) are not in the family")
    return int(line_counts(curve, np.array([a]), np.array([b]), method)[0])


def line_counts(curve: PlaneCurve, alphas, betas, method: str = "gcd") -> np.ndarray:
    """Intersection numbers for many lines at once (no class reduction)."""
    ctx = curve.ctx
    alphas = np.ascontiguousarray(alphas, dtype=np.int64)
    betas = np.ascontiguousarray(betas, dtype=np.int64)
    if method not in ("gcd", "brute"):
        raise ValueError(f"unknown method {method!r}")
    if method == "brute" and curve.is_norm_trace and ctx.has_tables:
        # enumerate x: Tr(alpha x + beta) == Norm(x), straight from the lookup tables
        tr, nm = ctx.trace_table(), ctx.norm_table()
        xs = np.arange(ctx.order, dtype=np.int64)
        return np.array([int(np.count_nonzero(tr[ctx.add_arr(ctx.mul_arr(xs, a), b)] == nm))
                         for a, b in zip(alphas.tolist(), betas.tolist())], dtype=np.int64)
    if ctx.has_tables:
        tx, ty, tc = curve.F.arrays()
        if method == "brute":
            return _kernels.batch_counts_brute(tx, ty, tc, alphas, betas, ctx.ktab)
        out = _kernels.batch_counts_gcd(tx, ty, tc, alphas, betas, ctx.ktab, _steps(ctx),
                                        curve.line_degree)
        if (out < 0).any():
            i = int(np.flatnonzero(out < 0)[0])
            raise LineInCurve(f"line ({alphas[i]}, {betas[i]}) lies on the curve")
        return out
    res = []
    for a, b in zip(alphas.tolist(), betas.tolist()):
        m = restrict_to_line(curve, a, b)
        if method == "brute":
            res.append(len(m.roots()) if not m.is_zero() else ctx.order)
        else:
            if m.is_zero():
                raise LineInCurve(f"line ({a}, {b}) lies on the curve")
            res.append(m.count_roots())
    return np.array(res, dtype=np.int64)


# -- class reduction (norm-trace curves) ----------------------------------------

def class_keys(ctx: FieldCtx, alphas, betas) -> tuple[np.ndarray, np.ndarray]:
    """(Norm alpha, Tr beta) per line; a field without a tower keys each line by itself."""
    alphas = np.asarray(alphas, dtype=np.int64)
    betas = np.asarray(betas, dtype=np.int64)
    if ctx.tower is None:
        return alphas, betas
    return ctx.norm_table()[alphas], ctx.trace_table()[betas]


def class_counts(curve: PlaneCurve, method: str = "gcd", spot_checks: int = 3,
                 seed: int = 0) -> dict[tuple[int, int], int]:
    """n(alpha, beta) per (Norm alpha, Tr beta) class of a norm-trace curve.

    One representative (smallest alpha and beta of the class) is evaluated; then
    `spot_checks` random lines of each class must agree with it.
    """
    if not curve.is_norm_trace:
        raise ClassReductionUnsound("class reduction is only justified for norm-trace curves")
    key = ("classes", method, spot_checks, seed)
    if key in curve._cache:
        return curve._cache[key]
    ctx = curve.ctx
    nm = ctx.norm_table()
    tr = ctx.trace_table()
    norms = sorted(set(nm[1:].tolist()))
    traces = sorted(set(tr.tolist()))
    alpha_of = {v: np.flatnonzero(nm == v) for v in norms}
    beta_of = {v: np.flatnonzero(tr == v) for v in traces}
    cls = [(n, t) for n in norms for t in traces]
    reps_a = np.array([alpha_of[n][0] for n, _ in cls], dtype=np.int64)
    reps_b = np.array([beta_of[t][0] for _, t in cls], dtype=np.int64)
    counts = line_counts(curve, reps_a, reps_b, method)
    table = {c: int(v) for c, v in zip(cls, counts)}
    if spot_checks:
        rng = np.random.default_rng(seed)
        sa, sb, owner = [], [], []
        for c in cls:
            sa.extend(rng.choice(alpha_of[c[0]], spot_checks).tolist())
            sb.extend(rng.choice(beta_of[c[1]], spot_checks).tolist())
            owner.extend([c] * spot_checks)
        got = line_counts(curve, np.array(sa), np.array(sb), method)
        for c, a, b, v in zip(owner, sa, sb, got.tolist()):
            if v != table[c]:
                raise ClassReductionUnsound(
                    f"line ({a}, {b}) meets the curve in {v} points, class {c} representative in {table[c]}")
    curve._cache[key] = table
    return table


def count_lookup(curve: PlaneCurve, method: str = "gcd"):
    """Vectorized n(alpha, beta) for arbitrary lines of the curve."""
    key = ("lookup", method)
    if key in curve._cache:
        return curve._cache[key]
    ctx = curve.ctx
    if curve.is_norm_trace:
        table = class_counts(curve, method)
        sub = np.array(sorted({k for c in table for k in c}), dtype=np.int64)
        slot = np.full(ctx.order, -1, dtype=np.int64)
        slot[sub] = np.arange(len(sub))
        grid = np.full((len(sub), len(sub)), -1, dtype=np.int64)
        for (n, t), v in table.items():
            grid[slot[n], slot[t]] = v
        nslot = slot[ctx.norm_table()]
        tslot = slot[ctx.trace_table()]

        def look(alphas, betas):
            return grid[nslot[np.asarray(alphas)], tslot[np.asarray(betas)]]
    else:
        Q = ctx.order
        al = np.repeat(np.arange(1, Q, dtype=np.int64), Q)
        be = np.tile(np.arange(Q, dtype=np.int64), Q - 1)
        dense = np.full((Q, Q), -1, dtype=np.int64)
        dense[al, be] = line_counts(curve, al, be, method)

        def look(alphas, betas):
            return dense[np.asarray(alphas), np.asarray(betas)]
    curve._cache[key] = look
    return look


def intersection_table(curve: PlaneCurve, family: LineFamily | None = None,
                       method: str = "gcd", spot_checks: int = 3,
                       seed: int = 0) -> list[IntersectionRecord]:
    """Intersection numbers grouped by (Norm alpha, Tr beta) class.

    Norm-trace curves use one representative per class.  Other curves evaluate
    every family line and key records by the line itself (or by class and count
    when the field carries a tower), so nothing is inferred across lines.
    """
    family = family or LineFamily("all")
    ctx = curve.ctx
    if curve.is_norm_trace:
        table = class_counts(curve, method, spot_checks, seed)
        if family.is_explicit():
            al, be = family.arrays(ctx)
            nk, tk = class_keys(ctx, al, be)
            tally = Counter(zip(nk.tolist(), tk.tolist()))
        else:
            nm, tr = ctx.norm_table(), ctx.trace_table()
            na = Counter(nm[1:].tolist())
            tb = Counter(tr.tolist())
            tally = Counter()
            for (n, t) in table:
                if family.selector == "trace-zero" and t != 0:
                    continue
                if family.selector == "trace-nonzero" and t == 0:
                    continue
                tally[(n, t)] = na[n] * tb[t]
        return [IntersectionRecord(n, t, table[(n, t)], c) for (n, t), c in sorted(tally.items())]
    al, be = family.arrays(ctx)
    counts = count_lookup(curve, method)(al, be) if not family.is_explicit() else \
        line_counts(curve, al, be, method)
    nk, tk = class_keys(ctx, al, be)
    tally = Counter(zip(nk.tolist(), tk.tolist(), counts.tolist()))
    return [IntersectionRecord(n, t, c, k) for (n, t, c), k in sorted(tally.items())]


def spectrum(records) -> list[int]:
    return sorted({r.count for r in records})


def family_by_count(curve: PlaneCurve, counts, method: str = "gcd") -> LineFamily:
    """Explicit family of every line meeting the curve in one of the given numbers of points."""
    ctx = curve.ctx
    Q = ctx.order
    al = np.repeat(np.arange(1, Q, dtype=np.int64), Q)
    be = np.tile(np.arange(Q, dtype=np.int64), Q - 1)
    n = count_lookup(curve, method)(al, be)
    keep = np.isin(n, list(counts))
    return LineFamily("explicit", np.stack([al[keep], be[keep]], axis=1).tolist())


# -- lines through points ----------------------------------------------------------

def lines_through(ctx: FieldCtx, x0: int, y0: int) -> tuple[np.ndarray, np.ndarray]:
    """All non-horizontal lines through (x0, y0): beta = y0 - alpha x0."""
    al = np.arange(1, ctx.order, dtype=np.int64)
    be = ctx.sub_arr(np.full_like(al, y0), ctx.mul_arr(al, x0))
    return al, be


def point_line_profile(curve: PlaneCurve, P, family: LineFamily | None = None,
                       method: str = "gcd") -> dict[int, int]:
    """Histogram {intersection size: number of family lines through P}."""
    family = family or LineFamily("all")
    ctx = curve.ctx
    x0, y0 = int(P[0]), int(P[1])
    if curve.F(x0, y0).value != 0:
        raise PointNotOnCurve(f"({x0}, {y0}) is not on the curve")
    al, be = lines_through(ctx, x0, y0)
    keep = family.contains_arr(ctx, al, be)
    n = count_lookup(curve, method)(al[keep], be[keep])
    return dict(sorted(Counter(n.tolist()).items()))


def all_point_profiles(curve: PlaneCurve, family: LineFamily | None = None,
                       method: str = "gcd") -> list[dict[int, int]]:
    """point_line_profile for every affine point, in point order."""
    family = family or LineFamily("all")
    ctx = curve.ctx
    pts = enumerate_affine_points(curve)
    look = count_lookup(curve, method)
    al = np.arange(1, ctx.order, dtype=np.int64)
    out = []
    for x0, y0 in pts:
        be = ctx.sub_arr(np.full_like(al, y0), ctx.mul_arr(al, x0))
        keep = family.contains_arr(ctx, al, be)
        out.append(dict(sorted(Counter(look(al[keep], be[keep]).tolist()).items())))
    return out


def profile_groups(profiles: list[dict[int, int]]) -> dict[tuple, int]:
    """Number of points sharing each distinct profile."""
    return dict(Counter(tuple(sorted(p.items())) for p in profiles))
