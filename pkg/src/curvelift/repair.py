"""Encoding, erasures, and line-based local repair."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .code import LiftedCode
from .errors import IndexOutOfRange, LengthMismatch, NoViableLine

ERASED = -1


class Incidence:
    """Which curve points lie on which family lines.

    Lines are keyed alpha * Q + beta.  ``members[start[j]:start[j+1]]`` are the
    positions on line j, ascending in x.  ``through[i]`` lists the line indices
    through position i (all family lines, including ones meeting only at P_i).
    """

    def __init__(self, code: LiftedCode):
        ctx = code.ctx
        Q = ctx.order
        pts = code.points
        n = len(pts)
        al = np.arange(1, Q, dtype=np.int64)
        A = np.tile(al, n)
        X = np.repeat(pts.xs, Q - 1)
        Y = np.repeat(pts.ys, Q - 1)
        Bt = ctx.sub_arr(Y, ctx.mul_arr(A, X))
        P = np.repeat(np.arange(n, dtype=np.int64), Q - 1)
        keep = code.plan.family.contains_arr(ctx, A, Bt)
        A, Bt, P, X = A[keep], Bt[keep], P[keep], X[keep]
        key = A * Q + Bt
        order = np.lexsort((X, key))
        key, P = key[order], P[order]
        self.keys, first, self.sizes = np.unique(key, return_index=True, return_counts=True)
        self.start = np.append(first, len(key)).astype(np.int64)
        self.members = P
        self.line_of_entry = np.repeat(np.arange(len(self.keys)), self.sizes)
        # per position, the lines through it, ordered by (alpha, beta)
        by_pos = np.lexsort((self.keys[self.line_of_entry], P))
        self.through_lines = self.line_of_entry[by_pos]
        cnt = np.bincount(P, minlength=n)
        self.through_start = np.concatenate([[0], np.cumsum(cnt)]).astype(np.int64)
        self.Q = Q
        self.xs = pts.xs

    def line_points(self, j: int) -> np.ndarray:
        return self.members[self.start[j]: self.start[j + 1]]

    def lines_through(self, i: int) -> np.ndarray:
        return self.through_lines[self.through_start[i]: self.through_start[i + 1]]

    def line(self, j: int) -> tuple[int, int]:
        k = int(self.keys[j])
        return k // self.Q, k % self.Q


def incidence(code: LiftedCode) -> Incidence:
    if getattr(code, "_incidence", None) is None:
        code._incidence = Incidence(code)
    return code._incidence


@dataclass
class Codeword:
    symbols: np.ndarray
    code: LiftedCode

    def __post_init__(self):
        self.symbols = np.asarray(self.symbols, dtype=np.int64)
        if self.symbols.shape != (self.code.n,):
            raise LengthMismatch(f"expected {self.code.n} symbols, got {self.symbols.shape}")

    def erased(self) -> np.ndarray:
        return np.flatnonzero(self.symbols == ERASED)

    def copy(self) -> "Codeword":
        return Codeword(self.symbols.copy(), self.code)

    def __eq__(self, o):
        return isinstance(o, Codeword) and np.array_equal(self.symbols, o.symbols)


@dataclass
class RepairPlan:
    position: int
    candidate_sets: list[tuple[tuple[int, int], tuple[int, ...]]] = field(default_factory=list)

    @property
    def lines(self):
        return [ln for ln, _ in self.candidate_sets]


def encode(code: LiftedCode, message) -> Codeword:
    msg = np.asarray([int(v) for v in message], dtype=np.int64)
    if msg.shape[0] != code.k:
        raise LengthMismatch(f"message has length {msg.shape[0]}, code dimension is {code.k}")
    word = _kernels.matmul(msg.reshape(1, -1), code.generator, code.ctx.ktab)[0]
    return Codeword(word, code)


def random_message(code: LiftedCode, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, code.ctx.order, size=code.k, dtype=np.int64)


def random_codewords(code: LiftedCode, count: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    M = rng.integers(0, code.ctx.order, size=(count, code.k), dtype=np.int64)
    return _kernels.matmul(M, code.generator, code.ctx.ktab)


def erase(cw, positions=None, count: int | None = None, seed: int | None = None):
    """Mark positions erased; takes a Codeword or a bare symbol array and returns the same kind."""
    out = cw.copy()
    syms = out.symbols if isinstance(out, Codeword) else out
    n = len(syms)
    if positions is not None:
        pos = np.asarray(sorted(set(int(p) for p in positions)), dtype=np.int64)
        if len(pos) and (pos[0] < 0 or pos[-1] >= n):
            raise IndexOutOfRange(f"erasure position outside [0, {n})")
    elif count:
        if count > n:
            raise IndexOutOfRange(f"cannot erase {count} of {n} symbols")
        pos = np.sort(np.random.default_rng(seed).choice(n, size=count, replace=False))
    else:
        pos = np.zeros(0, dtype=np.int64)
    syms[pos] = ERASED
    return out


def repair_plan(code: LiftedCode, i: int, symbols: np.ndarray | None = None) -> RepairPlan:
    """Recovery sets for position i, one per viable family line, best line first.

    A line is viable when it carries at least B-1 surviving points besides P_i.
    Sets use the B-1 survivors with the smallest x.
    """
    inc = incidence(code)
    need = code.plan.B - 1
    cands = []
    for j in inc.lines_through(i).tolist():
        pts = inc.line_points(j)
        pts = pts[pts != i]
        if symbols is not None:
            pts = pts[symbols[pts] != ERASED]
        if len(pts) >= need:
            cands.append((-len(pts), inc.line(j), tuple(pts[:need].tolist())))
    cands.sort()
    return RepairPlan(i, [(ln, s) for _, ln, s in cands])


def interpolate_at(code: LiftedCode, symbols: np.ndarray, readset, target: int) -> int:
    T = code.ctx.ktab
    idx = np.asarray(readset, dtype=np.int64)
    xs = code.points.xs
    w = _kernels.lagrange_weights(xs[idx], int(xs[target]), T)
    acc = 0
    for wj, v in zip(w.tolist(), symbols[idx].tolist()):
        acc = code.ctx.add(acc, code.ctx.mul(wj, v))
    return acc


def repair_position(cw: Codeword, i: int, return_info: bool = False):
    n = len(cw.symbols)
    if not 0 <= i < n:
        raise IndexOutOfRange(f"position {i} outside [0, {n})")
    plan = repair_plan(cw.code, i, cw.symbols)
    if not plan.candidate_sets:
        raise NoViableLine(f"no family line through position {i} has {cw.code.plan.B - 1} surviving points")
    line, reads = plan.candidate_sets[0]
    val = interpolate_at(cw.code, cw.symbols, reads, i)
    if return_info:
        return val, {"line": line, "reads": reads}
    return val


def repair_word(cw: Codeword) -> tuple[Codeword, dict]:
    """Fill every erasure, sweeping until nothing changes; repaired symbols are reused."""
    out = cw.copy()
    reads, log = 0, []
    progress = True
    while progress and (out.symbols == ERASED).any():
        progress = False
        for i in out.erased().tolist():
            try:
                val, info = repair_position(out, i, return_info=True)
            except NoViableLine:
                continue
            out.symbols[i] = val
            reads += len(info["reads"])
            log.append({"position": i, "line": list(info["line"]), "reads": list(info["reads"])})
            progress = True
    left = out.erased().tolist()
    if left:
        raise NoViableLine(f"{len(left)} erasures left with no viable line, first at position {left[0]}")
    return out, {"repaired": len(log), "symbols_read": reads, "steps": log}


def availability_audit(code: LiftedCode) -> dict[int, int]:
    """Per position: family lines through it with at least B-1 other curve points.

    Distinct lines through a point share only that point, so this is the number
    of pairwise disjoint recovery sets.
    """
    inc = incidence(code)
    ok = (inc.sizes - 1 >= code.plan.B - 1).astype(np.int64)
    per = np.add.reduceat(ok[inc.through_lines], inc.through_start[:-1]) \
        if len(inc.through_lines) else np.zeros(code.n, dtype=np.int64)
    empty = inc.through_start[:-1] == inc.through_start[1:]
    per = np.where(empty, 0, per)
    return {i: int(v) for i, v in enumerate(per.tolist())}


def repair_drill(code: LiftedCode, trials: int, erasure_count: int, seed: int = 0) -> dict:
    """Random codewords, random erasures, greedy single-symbol repair with write-back.

    mean_lines_tried counts family lines inspected per successful repair, blocked
    attempts on earlier passes included.
    """
    rng = np.random.default_rng(seed)
    inc = incidence(code)
    successes = 0
    reads = repairs = inspected = 0
    for _ in range(trials):
        msg = random_message(code, rng)
        cw = encode(code, msg)
        n = code.n
        pos = rng.choice(n, size=min(erasure_count, n), replace=False) if erasure_count else []
        bad = erase(cw, positions=pos)
        progress = True
        while progress and (bad.symbols == ERASED).any():
            progress = False
            for i in bad.erased().tolist():
                inspected += len(inc.lines_through(i))
                try:
                    val, info = repair_position(bad, i, return_info=True)
                except NoViableLine:
                    continue
                bad.symbols[i] = val
                reads += len(info["reads"])
                repairs += 1
                progress = True
        if np.array_equal(bad.symbols, cw.symbols):
            successes += 1
    return {"trials": trials, "erasures": erasure_count, "successes": successes,
            "success_rate": round(successes / trials, 3) if trials else 1.0,
            "mean_symbols_read": reads / repairs if repairs else 0.0,
            "mean_lines_tried": inspected / repairs if repairs else 0.0, "seed": seed}


def single_erasure_plans(code: LiftedCode):
    """Every (position, viable line) pair with only that position erased.

    Returns (target, line_index, read_idx, weights).
    """
    inc = incidence(code)
    need = code.plan.B - 1
    T = code.ctx.ktab
    tgt, lid, rows = [], [], []
    for i in range(code.n):
        for j in inc.lines_through(i).tolist():
            pts = inc.line_points(j)
            pts = pts[pts != i]
            if len(pts) >= need:
                tgt.append(i)
                lid.append(j)
                rows.append(pts[:need])
    tgt = np.array(tgt, dtype=np.int64)
    idx = np.array(rows, dtype=np.int64).reshape(len(tgt), need)
    xs = code.points.xs
    w = _kernels.batch_weights(np.ascontiguousarray(xs[idx]), xs[tgt], T)
    return tgt, np.array(lid, dtype=np.int64), idx, w


def roundtrip_check(code: LiftedCode, words: np.ndarray) -> dict:
    """Erase each position alone and repair it through every viable line, for every word."""
    tgt, lid, idx, w = single_erasure_plans(code)
    got = _kernels.apply_plans(np.ascontiguousarray(words), idx, w, code.ctx.ktab)
    want = words[:, tgt]
    mism = int(np.count_nonzero(got != want))
    # disjointness: recovery sets of one position from distinct lines never overlap
    disjoint = True
    bounds = np.flatnonzero(np.diff(tgt)) + 1
    for grp in np.split(np.arange(len(tgt)), bounds):
        flat = idx[grp].ravel()
        if len(np.unique(flat)) != len(flat):
            disjoint = False
            break
    covered = len(np.unique(tgt))
    return {"codewords": int(words.shape[0]), "repairs": int(got.size), "mismatches": mism,
            "max_reads": int(idx.shape[1]) if len(idx) else 0, "positions_covered": covered,
            "disjoint": disjoint}
