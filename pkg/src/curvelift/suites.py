"""Reproduction suites: compute values and compare them with stored expectations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .bounds import bound_B, verify_lower_bounds
from .code import (CodePlan, Monomial, auto_B, build_code, classify_monomials, eval_monomials,
                   membership_test, parameter_report)
from .curves import enumerate_affine_points, norm_trace_curve, schmidt_curve
from .lines import (LineFamily, all_point_profiles, family_by_count, intersection_table,
                    profile_groups, spectrum)

SUITES = ("ex33", "ex34", "binary", "table2", "table1", "bounds", "memberships")


def load_expectations(path=None) -> dict:
    if path is None:
        text = resources.files("curvelift").joinpath("data/expectations.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


@dataclass
class Check:
    id: str
    anchor: str
    expected: object
    actual: object
    ok: bool
    note: str = ""

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        s = f"{tag} {self.id} [{self.anchor}] expected={_short(self.expected)} actual={_short(self.actual)}"
        return s + (f"  ({self.note})" if self.note else "")

    def as_dict(self) -> dict:
        d = {"id": self.id, "anchor": self.anchor, "expected": self.expected,
             "actual": self.actual, "ok": self.ok}
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def as_dict(self) -> dict:
        return {"suite": self.suite, "ok": self.ok, "checks": [c.as_dict() for c in self.checks],
                "skipped": self.skipped}


def _short(v) -> str:
    return json.dumps(v, sort_keys=True, separators=(",", ":"))


def _normalize(v):
    return json.loads(json.dumps(v, sort_keys=True))


def matches(expected, actual, tol) -> bool:
    if isinstance(expected, (int, float)) and not isinstance(expected, bool) \
            and isinstance(actual, (int, float)) and not isinstance(actual, bool):
        return abs(actual - expected) <= tol
    return _same(_normalize(expected), _normalize(actual))


def _same(a, b) -> bool:
    # like ==, but a bool never equals an int
    if isinstance(a, bool) or isinstance(b, bool):
        return type(a) is type(b) and a == b
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(_same(a[k], b[k]) for k in a)
    return a == b


class Scope:
    """Knobs limiting how much of a suite runs."""

    def __init__(self, budget: bool = False, rmax: int | None = None, pmax: int | None = None,
                 oracle: bool = False):
        self.budget = budget
        self.rmax = rmax
        self.pmax = pmax
        self.oracle = oracle

    def allows(self, entry: dict, p: int | None = None, r: int | None = None) -> bool:
        if entry.get("budget") and not self.budget:
            return False
        if r is not None and self.rmax is not None and r > self.rmax:
            return False
        if p is not None and self.pmax is not None and p > self.pmax:
            return False
        return True


# -- shared computations ------------------------------------------------------------

_curves = {}


def _nt(q, r):
    if (q, r) not in _curves:
        _curves[(q, r)] = norm_trace_curve(q, r)
    return _curves[(q, r)]


def _method(q, r) -> str:
    # large fields: enumerate x through trace/norm tables instead of gcds of huge degree
    return "brute" if r >= 6 and q > 2 else "gcd"


def _profile_summary(curve, pts_mask) -> dict:
    pts = enumerate_affine_points(curve)
    profs = all_point_profiles(curve)
    chosen = [pr for pr, keep in zip(profs, pts_mask(pts)) if keep]
    groups = profile_groups(chosen)
    if len(groups) != 1:
        return {"points": len(chosen), "profiles": [{str(k): v for k, v in g} for g in groups]}
    (g, cnt), = groups.items()
    return {"points": cnt, "profile": {str(k): v for k, v in g}}


def _code_params(code) -> dict:
    rep = parameter_report(code)
    return {"n": rep["n"], "locality": rep["locality"], "availability": rep["availability"]}


def _typical_good(plan, max_degree) -> dict:
    classes = classify_monomials(plan)
    want = [c for c in classes if c.monomial.degree <= max_degree]
    return {"max_degree": max_degree, "all_good": bool(want) and all(c.good for c in want)}


def _span_members(code, max_degree) -> dict:
    from .code import monomial_box
    amax, bmax = monomial_box(code.plan.curve, code.plan.monomial_range)
    monos = [Monomial(a, d - a) for d in range(max_degree + 1) for a in range(d + 1)
             if a <= amax and d - a <= bmax]
    E = eval_monomials(code.plan.curve, code.points, monos)
    return {"max_degree": max_degree, "all_members": all(membership_test(code, row) for row in E)}


def _separation(r: int) -> dict:
    c = _nt(2, r)
    tz = build_code(CodePlan(c, LineFamily("trace-zero"), 2 ** (r - 1) + 1))
    al = build_code(CodePlan(c, LineFamily("all"), bound_B(2, r)))
    degs = [2 ** (r - 1) - 2, 2 ** (r - 1) - 1]
    monos = [Monomial(a, d - a) for d in degs for a in range(d + 1)]
    E = eval_monomials(c, tz.points, monos)
    return {"degrees": degs,
            "in_trace_zero_code": all(membership_test(tz, row) for row in E),
            "outside_all_lines_code": not any(membership_test(al, row) for row in E)}


_codes = {}


def _code(key, make):
    if key not in _codes:
        _codes[key] = build_code(make())
    return _codes[key]


# -- suites ------------------------------------------------------------------------------

def _ex33(entry, scope):
    i = entry["id"]
    x33, x34 = _nt(3, 3), (_nt(3, 4) if i.startswith("x34") else None)
    if i == "x33.points":
        return len(enumerate_affine_points(x33))
    if i == "x33.spectrum":
        return spectrum(intersection_table(x33))
    if i == "x33.profile.x_nonzero":
        return _profile_summary(x33, lambda pts: pts.xs != 0)
    if i == "x33.profile.x_zero":
        return _profile_summary(x33, lambda pts: pts.xs == 0)
    if i == "x33.B7.params":
        return _code_params(_code("x33B7", lambda: CodePlan(x33, LineFamily("all"), 7)))
    if i == "x33.B7.typical_good":
        return _typical_good(CodePlan(x33, LineFamily("all"), 7), 5)
    if i == "x33.B13.params":
        return _code_params(_code("x33B13", lambda: CodePlan(x33, family_by_count(x33, [13]), 13)))
    if i == "x33.B13.typical_good":
        return _typical_good(CodePlan(x33, family_by_count(x33, [13]), 13), 11)
    if i == "x34.points":
        return len(enumerate_affine_points(x34))
    if i == "x34.spectrum":
        return spectrum(intersection_table(x34))
    if i == "x34.B22.params":
        return _code_params(_code("x34B22", lambda: CodePlan(x34, LineFamily("all"), 22)))
    if i == "x34.B22.typical_good":
        return _typical_good(CodePlan(x34, LineFamily("all"), 22), 20)
    raise KeyError(i)


def _ex34(entry, scope):
    i = entry["id"]
    s = schmidt_curve()
    special = lambda pts: np.array([_special(s, pts, k) for k in range(len(pts))])
    if i == "schmidt.points":
        return len(enumerate_affine_points(s))
    if i == "schmidt.profile.generic":
        return _profile_summary(s, lambda pts: ~special(pts))
    if i == "schmidt.profile.special":
        return _profile_summary(s, special)
    if i == "schmidt.spectrum":
        return spectrum(intersection_table(s))
    if i == "schmidt.code.params":
        return _code_params(_code("schmidtB4", lambda: CodePlan(s, family_by_count(s, [4]), 4)))
    raise KeyError(i)


def _special(curve, pts, k) -> bool:
    """Points lying on no line that meets the curve in more than 4 points."""
    key = "special_points"
    if key not in curve._cache:
        profs = all_point_profiles(curve)
        curve._cache[key] = [max(p) <= 4 for p in profs]
    return curve._cache[key][k]


def _binary(entry, scope):
    i = entry["id"]
    r = int(i.split(".")[1][1:])
    if i.endswith(".classes"):
        out = {}
        for rec in intersection_table(_nt(2, r)):
            br = "trace-zero" if rec.trace_class == 0 else "trace-nonzero"
            out.setdefault(br, set()).add(rec.count)
        return {k: (v.pop() if len(v) == 1 else sorted(v)) for k, v in sorted(out.items())}
    return _separation(r)


def _pr(entry):
    parts = entry["id"].split(".")
    return int(parts[1][1:]), int(parts[2][1:])


def _table2(entry, scope):
    p, r = _pr(entry)
    c = _nt(p, r)
    counts = spectrum(intersection_table(c, method=_method(p, r)))
    return {"counts": counts, "B": bound_B(p, r), "B_refined": bound_B(p, r, refined=True)}


def _bounds(entry, scope):
    p, r = _pr(entry)
    c = _nt(p, r)
    method = _method(p, r)
    rep = verify_lower_bounds(c, method, raise_on_fail=False)
    recs = intersection_table(c, method=method)
    return {"holds": rep.ok and all(row["uniform_slack"] >= 0 for row in rep.rows),
            "sum_counts": sum(rec.count * rec.lines_in_class for rec in recs),
            "lines_through_point": rep.lines_through_point, "family_size": rep.family_size}


def _table1(entry, scope):
    i = entry["id"]
    if i == "table1.ntlc.rate_trend":
        rates = [_ntlc(r).k / _ntlc(r).n for r in range(3, 7)]
        return {"increasing": all(b > a for a, b in zip(rates, rates[1:])),
                "below": 0.25 if max(rates) < 0.25 else max(rates)}
    if i == "table1.ntlc.dimension":
        return {str(r): _ntlc(r).k for r in range(3, 7)}
    kind, rr = i.split(".")[1:]
    r = int(rr[1:])
    code = _ntlc(r) if kind == "ntlc" else _rntlc(r)
    return _code_params(code)


def _ntlc(r):
    c = _nt(2, r)
    return _code(("ntlc", r), lambda: CodePlan(c, LineFamily("all"), auto_B(c)))


def _rntlc(r):
    c = _nt(2, r)
    return _code(("rntlc", r), lambda: CodePlan(c, LineFamily("trace-zero"), 2 ** (r - 1) + 1))


def _memberships(entry, scope):
    i = entry["id"]
    if i.endswith(".ntlc_in_rntlc"):
        r = int(i.split(".")[1][1:])
        small, big = _ntlc(r), _rntlc(r)
        return all(membership_test(big, row) for row in small.generator)
    if i.endswith(".separation"):
        return _separation(int(i.split(".")[1][1:]))
    x33 = _nt(3, 3)
    if i == "mem.x33.B7.span":
        return _span_members(_code("x33B7", lambda: CodePlan(x33, LineFamily("all"), 7)), 5)
    if i == "mem.x33.B13.span":
        return _span_members(_code("x33B13", lambda: CodePlan(x33, family_by_count(x33, [13]), 13)), 11)
    raise KeyError(i)


RUNNERS = {"ex33": _ex33, "ex34": _ex34, "binary": _binary, "table2": _table2,
           "table1": _table1, "bounds": _bounds, "memberships": _memberships}


def _oracle_check(entry) -> Check | None:
    """gcd vs brute agreement on the intersection table behind a table2/bounds entry."""
    p, r = _pr(entry)
    c = _nt(p, r)
    a = intersection_table(c, method="gcd") if r < 6 or p == 2 else None
    b = intersection_table(c, method="brute")
    if a is None:
        return None
    same = [(x.norm_class, x.trace_class, x.count) for x in a] == \
           [(x.norm_class, x.trace_class, x.count) for x in b]
    return Check("oracle." + entry["id"], entry["anchor"], True, same, same, "gcd vs brute")


def run_suite(name: str, scope: Scope | None = None, expectations: dict | None = None) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    scope = scope or Scope()
    exp = expectations or load_expectations()
    rep = SuiteReport(name)
    runner = RUNNERS[name]
    for entry in exp[name]:
        pr = _pr(entry) if name in ("table2", "bounds") else (None, None)
        if not scope.allows(entry, *pr):
            rep.skipped.append(entry["id"])
            continue
        actual = runner(entry, scope)
        ok = matches(entry["expected"], actual, entry.get("tolerance", 0))
        note = ""
        if "stated" in entry:
            note = f"stated {_short(entry['stated'])}; {entry.get('note', '')}".strip("; ")
        rep.checks.append(Check(entry["id"], entry["anchor"], entry["expected"], _normalize(actual), ok, note))
        if scope.oracle and name in ("table2", "bounds"):
            oc = _oracle_check(entry)
            if oc is not None:
                rep.checks.append(oc)
    return rep
