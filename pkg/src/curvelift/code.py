"""Curve-lifted codes: good monomials, generator matrices, parameters."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from . import _kernels
from .bounds import bound_B, is_degenerate
from .curves import PlaneCurve, PointSet, enumerate_affine_points, line_poly_array, restrict_to_line
from .errors import (ClassReductionUnsound, DegeneratePlan, LengthMismatch,
                     LocalityUnsatisfiable)
from .lines import Line, LineFamily, count_lookup
from .poly import BiPoly, UniPoly

TYPICAL, SPORADIC, NOT_GOOD = "typical", "sporadic", "not-good"
RANGES = ("auto", "representative", "box")


@dataclass(frozen=True, order=True)
class Monomial:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("monomial exponents must be nonnegative")

    @property
    def degree(self) -> int:
        return self.a + self.b

    def poly(self, ctx) -> BiPoly:
        return BiPoly(ctx, {(self.a, self.b): 1})


@dataclass(frozen=True)
class MonomialClass:
    monomial: Monomial
    status: str
    worst_line_degree: int

    @property
    def good(self) -> bool:
        return self.status != NOT_GOOD


@dataclass
class CodePlan:
    curve: PlaneCurve
    family: LineFamily
    B: int
    mode: str = "monomial"
    monomial_range: str = "auto"

    def __post_init__(self):
        if self.mode not in ("monomial", "exact"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.monomial_range not in RANGES:
            raise ValueError(f"unknown monomial range {self.monomial_range!r}")

    @property
    def degenerate(self) -> bool:
        return is_degenerate(self.B)

    def require_nondegenerate(self):
        if self.degenerate:
            raise DegeneratePlan(f"B = {self.B}: F[t]_<=B-2 has no nonconstant polynomials; "
                                 "supply B explicitly (e.g. from the intersection table)")

    def to_spec(self) -> dict:
        return {"curve": self.curve.to_spec(), "family": self.family.to_spec(), "B": self.B,
                "mode": self.mode, "monomial_range": self.monomial_range}


def auto_B(curve: PlaneCurve, family: LineFamily | None = None) -> int:
    """B_{q,r} for norm-trace curves; otherwise the least nonzero family intersection number."""
    if curve.is_norm_trace:
        return bound_B(curve.q, curve.r)
    family = family or LineFamily("all")
    al, be = family.arrays(curve.ctx)
    n = count_lookup(curve)(al, be)
    n = n[n > 0]
    return int(n.min()) if len(n) else 0


def monomial_box(curve: PlaneCurve, monomial_range: str = "auto") -> tuple[int, int]:
    """Largest (a, b) searched.

    representative: a < (q^r-1)/(q-1), b < q^{r-1} (norm-trace only);
    box: a, b < field size.
    """
    Q = curve.ctx.order
    if monomial_range == "auto":
        monomial_range = "representative" if curve.is_norm_trace else "box"
    if monomial_range == "representative":
        if not curve.is_norm_trace:
            raise ValueError("the representative range is defined for norm-trace curves")
        q, r = curve.q, curve.r
        return (q ** r - 1) // (q - 1) - 1, q ** (r - 1) - 1
    return Q - 1, Q - 1


# -- reductions --------------------------------------------------------------

def reduce_on_line(f: BiPoly, curve: PlaneCurve, L: Line | tuple) -> UniPoly:
    """f(t, alpha t + beta) mod m_{alpha,beta}(t)."""
    a, b = (L.alpha, L.beta) if isinstance(L, Line) else (int(L[0]), int(L[1]))
    ctx = curve.ctx
    if f.ctx != ctx:
        from .errors import ContextMismatch
        raise ContextMismatch("function and curve live over different fields")
    m = restrict_to_line(curve, a, b)
    x = UniPoly.x(ctx)
    y = UniPoly(ctx, [b, a])
    out = UniPoly(ctx)
    for (i, j), c in f.terms.items():
        term = (x.powmod(i, m) * y.powmod(j, m)) % m
        out = out + term * c
    return out


def _closed_under_norm(curve: PlaneCurve, family: LineFamily) -> bool:
    """Does the family contain (alpha', beta) whenever it contains (alpha, beta) with Norm alpha' = Norm alpha?"""
    if not family.is_explicit():
        return True
    ctx = curve.ctx
    al, be = family.arrays(ctx)
    nm = ctx.norm_table()
    per_norm = np.bincount(nm[1:], minlength=ctx.order)   # how many alpha share each norm
    key_n = nm[al]
    # family lines per (norm, beta) must equal the size of the norm class
    pairs, cnt = np.unique(np.stack([key_n, be], axis=1), axis=0, return_counts=True)
    return bool(np.all(cnt == per_norm[pairs[:, 0]]))


def classification_lines(curve: PlaneCurve, family: LineFamily) -> tuple[np.ndarray, np.ndarray, bool]:
    """Lines on which monomial degrees must be measured.

    For norm-trace curves, t -> alpha^{-1} t turns m_{alpha,beta} into a polynomial
    depending only on (Norm alpha, beta) and scales each monomial by a constant, so
    one alpha per norm value suffices when the family is closed under that move.
    """
    ctx = curve.ctx
    al, be = family.arrays(ctx)
    if not (curve.is_norm_trace and _closed_under_norm(curve, family)):
        return al, be, False
    nm = ctx.norm_table()
    first = {}
    for a in range(1, ctx.order):
        first.setdefault(int(nm[a]), a)
    reps = np.array(sorted(first.values()), dtype=np.int64)
    keep = np.isin(al, reps)
    return al[keep], be[keep], True


def classify_monomials(plan: CodePlan, reverify: float = 0.1, seed: int = 0) -> list[MonomialClass]:
    plan.require_nondegenerate()
    curve, B = plan.curve, plan.B
    ctx = curve.ctx
    amax, bmax = monomial_box(curve, plan.monomial_range)
    al, be, reduced = classification_lines(curve, plan.family)
    tx, ty, tc = curve.F.arrays()
    for a, b in zip(al.tolist(), be.tolist()):
        line_poly_array(curve, a, b)      # raises LineInCurve for a component line
    worst = _kernels.worst_degrees(tx, ty, tc, al, be, amax, bmax, ctx.ktab, curve.line_degree)
    out = []
    for a in range(amax + 1):
        for b in range(bmax + 1):
            w = int(worst[a, b])
            if w > B - 2:
                st = NOT_GOOD
            elif a + b <= B - 2:
                st = TYPICAL
            else:
                st = SPORADIC
            out.append(MonomialClass(Monomial(a, b), st, w))
    out.sort(key=lambda c: (c.monomial.degree, c.monomial.a))
    if reduced and reverify > 0:
        _reverify(plan, out, reverify, seed)
    return out


def _reverify(plan: CodePlan, classes, frac: float, seed: int):
    curve = plan.curve
    ctx = curve.ctx
    good = [c.monomial for c in classes if c.good]
    if not good:
        return
    al, be = plan.family.arrays(ctx)
    rng = np.random.default_rng(seed)
    k = max(1, int(round(frac * len(al))))
    pick = rng.choice(len(al), size=min(k, len(al)), replace=False)
    amax = max(m.a for m in good)
    bmax = max(m.b for m in good)
    for i in pick.tolist():
        m = line_poly_array(curve, al[i], be[i])
        degs = _kernels.monomial_degrees(m, int(al[i]), int(be[i]), amax, bmax, ctx.ktab)
        for mono in good:
            if degs[mono.a, mono.b] > plan.B - 2:
                raise ClassReductionUnsound(
                    f"x^{mono.a} y^{mono.b} has degree {degs[mono.a, mono.b]} on line "
                    f"({al[i]}, {be[i]}) after being classified good")


def sporadic(classes) -> list[Monomial]:
    return [c.monomial for c in classes if c.status == SPORADIC]


# -- linear algebra helpers ------------------------------------------------------

def eval_monomials(curve: PlaneCurve, points: PointSet, monos) -> np.ndarray:
    ctx = curve.ctx
    E = np.zeros((len(monos), len(points)), dtype=np.int64)
    xp, yp = {}, {}
    for i, mo in enumerate(monos):
        if mo.a not in xp:
            xp[mo.a] = ctx.pow_arr(points.xs, mo.a)
        if mo.b not in yp:
            yp[mo.b] = ctx.pow_arr(points.ys, mo.b)
        E[i] = ctx.mul_arr(xp[mo.a], yp[mo.b])
    return E


def rank(M: np.ndarray, ctx) -> int:
    A = np.array(M, dtype=np.int64, copy=True)
    return len(_kernels.rref(A, ctx.ktab, False))


def independent_rows(M: np.ndarray, ctx) -> np.ndarray:
    """Indices of the first maximal independent subset of rows, in order."""
    A = np.ascontiguousarray(M.T, dtype=np.int64).copy()
    return _kernels.rref(A, ctx.ktab, False)


def nullspace(C: np.ndarray, ncols: int, ctx) -> np.ndarray:
    """Basis (rows) of {v : C v = 0}."""
    T = ctx.ktab
    if C.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    R = np.ascontiguousarray(C, dtype=np.int64).copy()
    piv = _kernels.rref(R, T, True)
    free = [j for j in range(ncols) if j not in set(piv.tolist())]
    K = np.zeros((len(free), ncols), dtype=np.int64)
    for t, f in enumerate(free):
        K[t, f] = 1
        for i, pc in enumerate(piv.tolist()):
            if R[i, f]:
                K[t, pc] = ctx.neg(int(R[i, f]))
    return K


def _exact_constraints(plan: CodePlan, monos) -> np.ndarray:
    """Rows: vanishing of t^j coefficients (j >= B-1) of reductions, every family line."""
    curve = plan.curve
    ctx = curve.ctx
    T = ctx.ktab
    amax = max(m.a for m in monos)
    bmax = max(m.b for m in monos)
    ai = np.array([m.a for m in monos])
    bi = np.array([m.b for m in monos])
    al, be = plan.family.arrays(ctx)
    acc = np.zeros((0, len(monos)), dtype=np.int64)
    chunk = []
    for a, b in zip(al.tolist(), be.tolist()):
        m = line_poly_array(curve, a, b)
        rem = _kernels.monomial_remainders(m, a, b, amax, bmax, T)   # (A, B, dm)
        block = rem[ai, bi, plan.B - 1:].T                            # (dm-B+1, nmono)
        if block.size:
            chunk.append(block)
        if sum(c.shape[0] for c in chunk) > 4 * len(monos):
            acc = _compress(np.vstack([acc] + chunk), ctx)
            chunk = []
    if chunk:
        acc = _compress(np.vstack([acc] + chunk), ctx)
    return acc


def _compress(M: np.ndarray, ctx) -> np.ndarray:
    A = np.ascontiguousarray(M, dtype=np.int64).copy()
    piv = _kernels.rref(A, ctx.ktab, False)
    return A[: len(piv)].copy()


# -- codes ---------------------------------------------------------------------------

@dataclass
class LiftedCode:
    plan: CodePlan
    points: PointSet
    generator: np.ndarray
    classes: list[MonomialClass]
    basis_monomials: list[Monomial]
    params: dict = field(default_factory=dict)
    _rref: tuple | None = field(default=None, repr=False)

    @property
    def ctx(self):
        return self.plan.curve.ctx

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def good_monomials(self) -> list[MonomialClass]:
        return [c for c in self.classes if c.good]

    def echelon(self):
        if self._rref is None:
            R = self.generator.copy()
            piv = _kernels.rref(R, self.ctx.ktab, True)
            self._rref = (R[: len(piv)].copy(), piv)
        return self._rref


def check_locality(plan: CodePlan) -> None:
    """Every family line that meets the curve must meet it in at least B points."""
    al, be = plan.family.arrays(plan.curve.ctx)
    n = count_lookup(plan.curve)(al, be)
    bad = (n > 0) & (n < plan.B)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise LocalityUnsatisfiable(
            f"line ({al[i]}, {be[i]}) meets the curve in {n[i]} < B = {plan.B} points")


def build_code(plan: CodePlan, seed: int = 0, with_monomial_k: bool = True) -> LiftedCode:
    plan.require_nondegenerate()
    check_locality(plan)
    curve = plan.curve
    ctx = curve.ctx
    pts = enumerate_affine_points(curve)
    classes = classify_monomials(plan, seed=seed)
    good = [c.monomial for c in classes if c.good]
    E = eval_monomials(curve, pts, good)
    keep = independent_rows(E, ctx)
    basis = [good[i] for i in keep.tolist()]
    k_mono = len(basis)
    if plan.mode == "monomial":
        G = E[keep]
        params = {"k_monomial": k_mono}
    else:
        amax, bmax = monomial_box(curve, plan.monomial_range)
        monos = [Monomial(a, b) for a in range(amax + 1) for b in range(bmax + 1)]
        C = _exact_constraints(plan, monos)
        K = nullspace(C, len(monos), ctx)
        Ev = eval_monomials(curve, pts, monos)
        G = _kernels.matmul(K, Ev, ctx.ktab)
        G = G[independent_rows(G, ctx)]
        params = {"k_monomial": k_mono, "k_exact": int(G.shape[0])}
        basis = []
    code = LiftedCode(plan, pts, np.ascontiguousarray(G), classes, basis, params)
    code.params.update(base_params(code))
    return code


def base_params(code: LiftedCode) -> dict:
    n, k = code.n, code.k
    return {"n": n, "k": k, "locality": code.plan.B - 1, "rate": k / n if n else 0.0,
            "typical": sum(c.status == TYPICAL for c in code.classes),
            "sporadic": sum(c.status == SPORADIC for c in code.classes),
            "good": sum(c.good for c in code.classes)}


def claimed_availability(code: LiftedCode) -> int | None:
    """What the construction promises: every line through a point, when all lines are used."""
    if code.plan.family.selector == "all":
        return code.ctx.order - 1
    return None


def closed_form_dimension(q: int, r: int) -> float:
    """(1/2) M (M + 1) with M = q^{r-1} - (r-1)(q-1) q^{(r-2)/2}, as a real number."""
    M = q ** (r - 1) - (r - 1) * (q - 1) * sqrt(q) ** (r - 2)
    return 0.5 * M * (M + 1)


def parameter_report(code: LiftedCode, audit: dict | None = None) -> dict:
    from .repair import availability_audit
    if audit is None:
        audit = availability_audit(code)
    B = code.plan.B
    rep = dict(code.params)
    rep.update(base_params(code))
    rep["availability"] = int(min(audit.values())) if audit else 0
    rep["availability_claimed"] = claimed_availability(code)
    rep["mode"] = code.plan.mode
    rep["B"] = B
    rep["typical_count_exact"] = (B - 1) * B // 2
    curve = code.plan.curve
    if curve.is_norm_trace:
        rep["dimension_closed_form"] = closed_form_dimension(curve.q, curve.r)
    return rep


def membership_test(code: LiftedCode, word) -> bool:
    w = np.asarray([int(v) for v in word], dtype=np.int64)
    if w.shape[0] != code.n:
        raise LengthMismatch(f"word has length {w.shape[0]}, code length is {code.n}")
    R, piv = code.echelon()
    W = w.reshape(1, -1).copy()
    _kernels.reduce_vectors(R, piv, W, code.ctx.ktab)
    return not W.any()
