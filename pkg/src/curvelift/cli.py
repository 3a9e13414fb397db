"""Command-line entry point.

Exit codes: 0 success, 1 failed check or computational error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from . import io
from .bounds import bound_B, trace_branch_bounds, uniform_bound, verify_lower_bounds
from .code import CodePlan, auto_B, build_code, parameter_report
from .curves import PlaneCurve, enumerate_affine_points, norm_trace_curve, schmidt_curve
from .errors import CurveLiftError
from .field import is_prime, make_field, prime_power, tower_field
from .lines import LineFamily, all_point_profiles, family_by_count, intersection_table
from .repair import (Codeword, availability_audit, encode, erase, random_message, repair_drill,
                     repair_word)
from .suites import SUITES, Scope, run_suite


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required for '{args.cmd}'")


# -- resolving flags ----------------------------------------------------------------

def get_curve(args) -> PlaneCurve:
    if args.curve:
        if args.curve == "schmidt":
            return schmidt_curve()
        if not Path(args.curve).exists():
            raise UsageError(f"--curve: no such file {args.curve!r}")
        return io.load_curve(args.curve)
    if args.q is None or args.r is None:
        raise UsageError("give --q and --r (norm-trace curve) or --curve <file>")
    try:
        prime_power(args.q)
    except ValueError:
        raise UsageError(f"--q {args.q} is not a prime power")
    if args.r < 2:
        raise UsageError(f"--r must be at least 2, got {args.r}")
    return norm_trace_curve(args.q, args.r)


def get_family(args, curve: PlaneCurve) -> LineFamily:
    sel = args.lines
    if sel in ("all", "trace-nonzero", "trace-zero"):
        return LineFamily(sel)
    if sel.startswith("count:"):
        try:
            counts = [int(v) for v in sel[6:].split(",") if v]
        except ValueError:
            raise UsageError(f"--lines {sel!r}: expected count:<n>[,<n>...]")
        return family_by_count(curve, counts)
    if not Path(sel).exists():
        raise UsageError(f"--lines: expected all|trace-nonzero|trace-zero|count:<n,..>|<file>, got {sel!r}")
    return LineFamily.from_spec(io.load_json(sel))


def get_B(args, curve, family) -> int:
    if args.B == "auto":
        return auto_B(curve, family)
    try:
        return int(args.B)
    except ValueError:
        raise UsageError(f"--B must be 'auto' or an integer, got {args.B!r}")


def get_code(args):
    _need(args, "code")
    if not Path(args.code).exists():
        raise UsageError(f"--code: no such file {args.code!r}")
    return io.load_code(args.code)


# -- subcommands ------------------------------------------------------------------------

def cmd_field(args):
    if args.q is not None and args.r is not None:
        ctx = tower_field(args.q, args.r)
    else:
        _need(args, "char", "deg")
        if not is_prime(args.char):
            raise UsageError(f"--char {args.char} is not prime")
        ctx = make_field(args.char, args.deg)
    _emit(io.dumps(ctx.to_spec()), args.out)
    return 0


def cmd_curve(args):
    curve = get_curve(args)
    pts = enumerate_affine_points(curve)
    if args.format == "csv":
        _emit(io.csv_text(["x", "y"], pts.as_list()), args.out)
    else:
        _emit(io.dumps({"curve": curve.to_spec(), "field": curve.ctx.to_spec(),
                        "affine_points": len(pts), "degree": curve.total_degree,
                        "genus": curve.genus}), args.out)
    return 0


def cmd_intersect(args):
    curve = get_curve(args)
    family = get_family(args, curve)
    recs = intersection_table(curve, family, "gcd")
    status = 0
    if args.oracle:
        brute = intersection_table(curve, family, "brute")
        if brute != recs:
            print("oracle mismatch: gcd and brute-force intersection tables differ", file=sys.stderr)
            status = 1
    if args.format == "json":
        _emit(io.dumps([vars(r) for r in recs]), args.out)
    else:
        _emit(io.intersection_csv(recs), args.out)
    return status


def cmd_profile(args):
    curve = get_curve(args)
    family = get_family(args, curve)
    profs = all_point_profiles(curve, family)
    pts = enumerate_affine_points(curve)
    if args.format == "json":
        groups = Counter(tuple(sorted(p.items())) for p in profs)
        rows = [{"profile": {str(k): v for k, v in g}, "points": n} for g, n in sorted(groups.items())]
        _emit(io.dumps(rows), args.out)
    else:
        _emit(io.profile_csv(pts, profs), args.out)
    return 0


def cmd_bounds(args):
    if args.char is None and args.q is None:
        raise UsageError("give --char <p> or --q <q>")
    q = args.q if args.q is not None else args.char
    try:
        prime_power(q)
    except ValueError:
        raise UsageError(f"{q} is not a prime power")
    rmax = args.rmax if args.rmax is not None else (args.r or 5)
    header = ["q", "r", "B", "B_refined", "bound_trace_zero", "bound_trace_nonzero", "uniform"]
    if args.verify:
        header += ["min_trace_zero", "min_trace_nonzero", "ok"]
    rows, status = [], 0
    for r in range(2, rmax + 1):
        br = trace_branch_bounds(q, r)
        row = [q, r, bound_B(q, r), bound_B(q, r, refined=True), br["trace-zero"],
               br["trace-nonzero"], uniform_bound(q, r)]
        if args.verify:
            rep = verify_lower_bounds(norm_trace_curve(q, r), "brute" if args.oracle else "gcd",
                                      raise_on_fail=False)
            ok = rep.ok and all(x["uniform_slack"] >= 0 for x in rep.rows)
            row += [rep.minimum.get("trace-zero", ""), rep.minimum.get("trace-nonzero", ""), int(ok)]
            status |= 0 if ok else 1
        rows.append(row)
    _emit(io.csv_text(header, rows), args.out)
    return status


def cmd_build(args):
    curve = get_curve(args)
    family = get_family(args, curve)
    plan = CodePlan(curve, family, get_B(args, curve, family), args.mode, args.range)
    code = build_code(plan, seed=args.seed)
    rep = parameter_report(code)
    if args.out:
        io.save_code(code, args.out)
    sys.stdout.write(io.dumps(rep))
    return 0


def cmd_encode(args):
    code = get_code(args)
    if args.message:
        _, rows = io.read_csv(args.message)
        msg = [int(v) for v in rows[0]]
    else:
        msg = random_message(code, np.random.default_rng(args.seed))
    _emit(io.codeword_csv(encode(code, msg).symbols), args.out)
    return 0


def _read_word(args, code=None):
    _need(args, "word")
    if not Path(args.word).exists():
        raise UsageError(f"--word: no such file {args.word!r}")
    return io.read_codeword_csv(args.word, code)


def cmd_erase(args):
    cw = _read_word(args)
    if args.positions:
        try:
            pos = [int(v) for v in args.positions.split(",") if v]
        except ValueError:
            raise UsageError(f"--positions expects comma-separated integers, got {args.positions!r}")
        out = erase(cw, positions=pos)
    else:
        _need(args, "count")
        out = erase(cw, count=args.count, seed=args.seed)
    _emit(io.codeword_csv(out), args.out)
    return 0


def cmd_repair(args):
    code = get_code(args)
    cw = Codeword(_read_word(args, code), code)
    fixed, info = repair_word(cw)
    _emit(io.codeword_csv(fixed.symbols), args.out)
    print(json.dumps({"repaired": info["repaired"], "symbols_read": info["symbols_read"]}),
          file=sys.stderr)
    return 0


def cmd_audit(args):
    code = get_code(args)
    aud = availability_audit(code)
    hist = Counter(aud.values())
    _emit(io.dumps({"n": code.n, "locality": code.plan.B - 1,
                    "availability": min(aud.values()) if aud else 0,
                    "availability_max": max(aud.values()) if aud else 0,
                    "histogram": {str(k): v for k, v in sorted(hist.items())}}), args.out)
    return 0


def cmd_drill(args):
    code = get_code(args)
    rep = repair_drill(code, args.trials, args.erasures, args.seed)
    _emit(io.dumps(rep), args.out)
    return 0


def cmd_reproduce(args):
    _need(args, "suite")
    names = SUITES if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"--suite must be one of all, {', '.join(SUITES)}; got {args.suite!r}")
    scope = Scope(budget=args.budget, rmax=args.rmax, pmax=args.pmax, oracle=args.oracle)
    reports = []
    for name in names:
        rep = run_suite(name, scope)
        for c in rep.checks:
            print(c.line())
        for s in rep.skipped:
            print(f"SKIP {s} (needs --budget or a wider --rmax/--pmax)")
        print(f"suite {name}: {'pass' if rep.ok else 'FAIL'} "
              f"({sum(c.ok for c in rep.checks)}/{len(rep.checks)} checks)")
        reports.append(rep.as_dict())
    if args.out:
        io.save_json(reports, args.out)
    return 0 if all(r["ok"] for r in reports) else 1


COMMANDS = {"field": cmd_field, "curve": cmd_curve, "intersect": cmd_intersect,
            "profile": cmd_profile, "bounds": cmd_bounds, "build": cmd_build,
            "encode": cmd_encode, "erase": cmd_erase, "repair": cmd_repair, "audit": cmd_audit,
            "drill": cmd_drill, "reproduce": cmd_reproduce}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="curvelift", description="Curve-lifted locally recoverable codes.")
    ap.add_argument("cmd", choices=sorted(COMMANDS), metavar="command",
                    help="one of: " + ", ".join(COMMANDS))
    ap.add_argument("--q", type=int)
    ap.add_argument("--r", type=int)
    ap.add_argument("--char", type=int, help="field characteristic p")
    ap.add_argument("--deg", type=int, help="extension degree m")
    ap.add_argument("--curve", help="curve spec JSON, or 'schmidt'")
    ap.add_argument("--lines", default="all",
                    help="all | trace-nonzero | trace-zero | count:<n,...> | family JSON")
    ap.add_argument("--B", default="auto")
    ap.add_argument("--mode", choices=["monomial", "exact"], default="monomial")
    ap.add_argument("--range", choices=["auto", "representative", "box"], default="auto",
                    help="monomial search range")
    ap.add_argument("--oracle", action="store_true", help="cross-check gcd counts by brute force")
    ap.add_argument("--out")
    ap.add_argument("--format", choices=["json", "csv"])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--suite")
    ap.add_argument("--budget", action="store_true", help="include the slow table rows")
    ap.add_argument("--rmax", type=int)
    ap.add_argument("--pmax", type=int)
    ap.add_argument("--verify", action="store_true", help="bounds: check against computed tables")
    ap.add_argument("--code", help="code artifact JSON")
    ap.add_argument("--word", help="codeword CSV")
    ap.add_argument("--message", help="message CSV (one row of k symbols)")
    ap.add_argument("--positions", help="comma-separated erasure positions")
    ap.add_argument("--count", type=int, help="number of random erasures")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--erasures", type=int, default=1)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.cmd in ("intersect", "profile") else "json"
    try:
        return COMMANDS[args.cmd](args)
    except UsageError as e:
        ap.print_usage(sys.stderr)
        print(f"{ap.prog}: error: {e}", file=sys.stderr)
        return 2
    except CurveLiftError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
