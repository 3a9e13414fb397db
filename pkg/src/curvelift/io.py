"""File formats: JSON specs and artifacts, integer-only CSV tables."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .code import CodePlan, LiftedCode, Monomial, MonomialClass
from .curves import PlaneCurve, PointSet
from .errors import LengthMismatch
from .field import FieldCtx
from .lines import IntersectionRecord, LineFamily
from .repair import ERASED, Codeword

ERASURE_TOKEN = "?"


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, default=_jsonable) + "\n"


def _jsonable(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def write_text(path, text: str) -> None:
    Path(path).write_text(text)


def save_json(obj, path) -> None:
    write_text(path, dumps(obj))


def load_json(path):
    return json.loads(Path(path).read_text())


# -- specs -------------------------------------------------------------------------

def save_field(ctx: FieldCtx, path) -> None:
    save_json(ctx.to_spec(), path)


def load_field(path) -> FieldCtx:
    return FieldCtx.from_spec(load_json(path))


def save_curve(curve: PlaneCurve, path) -> None:
    save_json(curve.to_spec(), path)


def load_curve(path) -> PlaneCurve:
    return PlaneCurve.from_spec(load_json(path))


# -- CSV ------------------------------------------------------------------------------

def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty CSV (header row is mandatory)")
    return rows[0], rows[1:]


INTERSECTION_HEADER = ["norm_class", "trace_class", "count", "lines_in_class"]
PROFILE_HEADER = ["point_x", "point_y", "size", "num_lines"]


def intersection_csv(records: list[IntersectionRecord]) -> str:
    rows = sorted((r.norm_class, r.trace_class, r.count, r.lines_in_class) for r in records)
    return csv_text(INTERSECTION_HEADER, rows)


def read_intersection_csv(path) -> list[IntersectionRecord]:
    header, rows = read_csv(path)
    if header != INTERSECTION_HEADER:
        raise ValueError(f"{path}: unexpected header {header}")
    return [IntersectionRecord(*map(int, r)) for r in rows]


def profile_csv(points: PointSet, profiles: list[dict[int, int]]) -> str:
    rows = []
    for (x, y), prof in zip(points, profiles):
        for size, num in sorted(prof.items()):
            rows.append((x, y, size, num))
    return csv_text(PROFILE_HEADER, rows)


def codeword_csv(symbols) -> str:
    syms = [ERASURE_TOKEN if int(s) == ERASED else str(int(s)) for s in symbols]
    return csv_text([f"s{i}" for i in range(len(syms))], [syms])


def read_codeword_csv(path, code: LiftedCode | None = None) -> np.ndarray:
    header, rows = read_csv(path)
    if len(rows) != 1:
        raise ValueError(f"{path}: expected exactly one data row, found {len(rows)}")
    vals = [ERASED if tok.strip() == ERASURE_TOKEN else int(tok) for tok in rows[0]]
    if len(vals) != len(header):
        raise LengthMismatch(f"{path}: {len(vals)} symbols under a {len(header)}-column header")
    out = np.array(vals, dtype=np.int64)
    if code is not None and len(out) != code.n:
        raise LengthMismatch(f"{path}: word has length {len(out)}, code length is {code.n}")
    return out


# -- code artifacts --------------------------------------------------------------

def code_to_dict(code: LiftedCode) -> dict:
    return {
        "plan": code.plan.to_spec(),
        "points": code.points.as_list(),
        "good_monomials": [[c.monomial.a, c.monomial.b, c.status] for c in code.good_monomials],
        "basis_monomials": [[m.a, m.b] for m in code.basis_monomials],
        "generator": code.generator.tolist(),
        "params": {k: code.params[k] for k in sorted(code.params)},
    }


def code_from_dict(d: dict) -> LiftedCode:
    p = d["plan"]
    curve = PlaneCurve.from_spec(p["curve"])
    plan = CodePlan(curve, LineFamily.from_spec(p["family"]), int(p["B"]), p["mode"],
                    p.get("monomial_range", "auto"))
    pts = np.array(d["points"], dtype=np.int64).reshape(-1, 2)
    points = PointSet(curve.ctx, pts[:, 0], pts[:, 1])
    n = len(points)
    G = np.array(d["generator"], dtype=np.int64).reshape(-1, n)
    classes = [MonomialClass(Monomial(a, b), st, -1) for a, b, st in d["good_monomials"]]
    basis = [Monomial(a, b) for a, b in d["basis_monomials"]]
    return LiftedCode(plan, points, np.ascontiguousarray(G), classes, basis, dict(d["params"]))


def save_code(code: LiftedCode, path) -> None:
    save_json(code_to_dict(code), path)


def load_code(path) -> LiftedCode:
    return code_from_dict(load_json(path))


def save_codeword(cw: Codeword | np.ndarray, path) -> None:
    syms = cw.symbols if isinstance(cw, Codeword) else cw
    write_text(path, codeword_csv(syms))
