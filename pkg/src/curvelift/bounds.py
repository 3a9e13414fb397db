"""Lower bounds on line intersection numbers of norm-trace curves.

All bounds have the shape q^{r-1} - C * q^{(r-2)/2} - c0.  For odd r the middle
term is irrational, so the floor is taken with integer square roots and then
re-checked by squaring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, isqrt

from .curves import PlaneCurve
from .errors import BoundViolated, InvalidExtensionDegree
from .lines import LineFamily, intersection_table


def _ceil_sqrt(n: int) -> int:
    s = isqrt(n)
    return s if s * s == n else s + 1


def floor_bound(q: int, r: int, C: int, c0: int) -> int:
    """floor(q^{r-1} - C q^{(r-2)/2} - c0) exactly, for C >= 0."""
    if r < 2:
        raise InvalidExtensionDegree(f"r must be at least 2, got {r}")
    top = q ** (r - 1)
    if r % 2 == 0:
        return top - C * q ** ((r - 2) // 2) - c0
    sq = C * C * q ** (r - 2)
    t = _ceil_sqrt(sq)
    # guard: t - 1 < C q^{(r-2)/2} <= t
    if sq and not ((t - 1) ** 2 < sq <= t * t):
        raise ArithmeticError("integer square-root check failed")
    return top - t - c0


def bound_B(q: int, r: int, refined: bool = False) -> int:
    """B_{q,r}, or the refined B'_{q,r} (d = gcd(r, q-1))."""
    if r < 2:
        raise InvalidExtensionDegree(f"r must be at least 2, got {r}")
    if refined:
        return floor_bound(q, r, gcd(r, q - 1) - 1 + (r - 1) * (q - 2), 1)
    if q == 2:
        return 2 ** (r - 1) - 1
    return floor_bound(q, r, (r - 1) * (q - 1), 1)


def is_degenerate(B: int) -> bool:
    """F[t]_{<= B-2} holds no nonconstant polynomial."""
    return B <= 2


def trace_branch_bounds(q: int, r: int) -> dict[str, int]:
    """Floors of the two per-line lower bounds, split on whether Tr(beta) vanishes."""
    return {
        "trace-nonzero": floor_bound(q, r, gcd(r, q - 1) - 1 + (r - 1) * (q - 2), 1),
        "trace-zero": floor_bound(q, r, (r - 1) * (q - 1), 0),
    }


def uniform_bound(q: int, r: int) -> int:
    """The branch-free bound valid for every line."""
    return floor_bound(q, r, (r - 1) * (q - 1), 1)


@dataclass
class BoundReport:
    q: int
    r: int
    rows: list[dict] = field(default_factory=list)
    minimum: dict[str, int] = field(default_factory=dict)
    bound: dict[str, int] = field(default_factory=dict)
    uniform: int = 0
    lines_through_point: int = 0
    family_size: int = 0

    @property
    def ok(self) -> bool:
        return all(row["slack"] >= 0 for row in self.rows)

    def as_dict(self) -> dict:
        return {"q": self.q, "r": self.r, "minimum": self.minimum, "bound": self.bound,
                "slack": {k: self.minimum[k] - self.bound[k] for k in self.minimum},
                "uniform_bound": self.uniform, "lines_through_point": self.lines_through_point,
                "family_size": self.family_size, "classes": self.rows}


def verify_lower_bounds(curve: PlaneCurve, method: str = "gcd", raise_on_fail: bool = True) -> BoundReport:
    if not curve.is_norm_trace:
        raise ValueError("lower bounds are stated for norm-trace curves only")
    q, r = curve.q, curve.r
    branch = trace_branch_bounds(q, r)
    rep = BoundReport(q, r, bound=dict(branch), uniform=uniform_bound(q, r),
                      lines_through_point=q ** r - 1, family_size=(q ** r - 1) * q ** r)
    for rec in intersection_table(curve, LineFamily("all"), method):
        br = "trace-zero" if rec.trace_class == 0 else "trace-nonzero"
        rep.rows.append({"norm_class": rec.norm_class, "trace_class": rec.trace_class,
                         "count": rec.count, "branch": br, "bound": branch[br],
                         "slack": rec.count - branch[br],
                         "uniform_slack": rec.count - rep.uniform})
        rep.minimum[br] = min(rep.minimum.get(br, rec.count), rec.count)
    if raise_on_fail:
        bad = [row for row in rep.rows if row["slack"] < 0 or row["uniform_slack"] < 0]
        if bad:
            raise BoundViolated(f"X_{{{q},{r}}}: {bad[0]}")
    return rep
