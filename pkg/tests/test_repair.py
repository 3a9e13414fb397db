from __future__ import annotations

import numpy as np
import pytest

from curvelift.bounds import bound_B
from curvelift.code import CodePlan, build_code, membership_test
from curvelift.curves import norm_trace_curve, schmidt_curve
from curvelift.errors import IndexOutOfRange, LengthMismatch, NoViableLine
from curvelift.lines import LineFamily, family_by_count
from curvelift.repair import (ERASED, Codeword, availability_audit, encode, erase, incidence,
                              random_codewords, random_message, repair_drill, repair_plan,
                              repair_position, repair_word, roundtrip_check)

import oracles


@pytest.fixture(scope="module")
def x23():
    return build_code(CodePlan(norm_trace_curve(2, 3), LineFamily("all"), bound_B(2, 3)))


@pytest.fixture(scope="module")
def x24():
    return build_code(CodePlan(norm_trace_curve(2, 4), LineFamily("all"), bound_B(2, 4)))


def test_encode_matches_reference(x23):
    ref = oracles.RefField(2, x23.ctx.modulus)
    msg = [3, 5, 6]
    want = [0] * x23.n
    for coef, row in zip(msg, x23.generator.tolist()):
        want = [ref.add(w, ref.mul(coef, g)) for w, g in zip(want, row)]
    assert encode(x23, msg).symbols.tolist() == want
    with pytest.raises(LengthMismatch):
        encode(x23, [1, 2])


def test_every_position_every_line(x23):
    rng = np.random.default_rng(11)
    cw = encode(x23, random_message(x23, rng))
    inc = incidence(x23)
    for i in range(x23.n):
        bad = erase(cw, positions=[i])
        plan = repair_plan(x23, i, bad.symbols)
        assert len(plan.candidate_sets) == 7
        for _, reads in plan.candidate_sets:
            assert len(reads) == x23.plan.B - 1
            assert i not in reads
        val = repair_position(bad, i)
        assert val == cw.symbols[i]
        assert len(inc.lines_through(i)) == x23.ctx.order - 1


def test_roundtrip_check(x23):
    words = random_codewords(x23, 20, seed=2)
    rep = roundtrip_check(x23, words)
    assert rep["mismatches"] == 0
    assert rep["disjoint"]
    assert rep["max_reads"] == x23.plan.B - 1
    assert rep["positions_covered"] == x23.n


def test_roundtrip_detects_corruption(x23):
    words = random_codewords(x23, 3, seed=2)
    words[0, 0] ^= 1
    assert roundtrip_check(x23, words)["mismatches"] > 0


def test_repair_word_multiple_erasures(x24):
    rng = np.random.default_rng(4)
    cw = encode(x24, random_message(x24, rng))
    bad = erase(cw, count=12, seed=9)
    assert len(bad.erased()) == 12
    fixed, info = repair_word(bad)
    assert fixed == cw
    assert info["repaired"] == 12
    assert info["symbols_read"] == 12 * (x24.plan.B - 1)


def test_repair_word_gives_up(x23):
    cw = encode(x23, [1, 2, 3])
    bad = erase(cw, positions=range(x23.n))
    with pytest.raises(NoViableLine):
        repair_word(bad)


def test_erase_errors_and_kinds(x23):
    cw = encode(x23, [1, 0, 0])
    with pytest.raises(IndexOutOfRange):
        erase(cw, positions=[x23.n])
    with pytest.raises(IndexOutOfRange):
        erase(cw, count=x23.n + 1)
    with pytest.raises(IndexOutOfRange):
        repair_position(cw, -1)
    arr = erase(cw.symbols, positions=[0, 3])
    assert isinstance(arr, np.ndarray) and (arr[[0, 3]] == ERASED).all()
    assert (cw.symbols != ERASED).all()
    with pytest.raises(LengthMismatch):
        Codeword(cw.symbols[:-1], x23)


def test_seeded_erasures_reproducible(x24):
    cw = encode(x24, random_message(x24, np.random.default_rng(0)))
    n5 = round(0.05 * x24.n)
    a = erase(cw, count=n5, seed=123).erased()
    b = erase(cw, count=n5, seed=123).erased()
    assert np.array_equal(a, b) and len(a) == n5


def test_availability_audits():
    x33 = norm_trace_curve(3, 3)
    code = build_code(CodePlan(x33, LineFamily("all"), 7))
    assert set(availability_audit(code).values()) == {26}
    s = schmidt_curve()
    code = build_code(CodePlan(s, family_by_count(s, [4]), 4))
    aud = availability_audit(code)
    assert sorted(set(aud.values())) == [30, 42]
    assert min(aud.values()) == 30


def test_drill_deterministic(x24):
    a = repair_drill(x24, trials=200, erasure_count=3, seed=5)
    b = repair_drill(x24, trials=200, erasure_count=3, seed=5)
    assert a == b
    assert a["success_rate"] == 1.0
    assert a["mean_symbols_read"] == x24.plan.B - 1


def test_repaired_word_is_codeword(x24):
    cw = encode(x24, random_message(x24, np.random.default_rng(1)))
    fixed, _ = repair_word(erase(cw, count=30, seed=1))
    assert membership_test(x24, fixed.symbols)
