from __future__ import annotations

import json

import numpy as np
import pytest

from curvelift import io
from curvelift.bounds import bound_B
from curvelift.code import CodePlan, build_code, membership_test
from curvelift.curves import custom_curve, norm_trace_curve, schmidt_curve
from curvelift.errors import LengthMismatch
from curvelift.field import FieldCtx, make_field, tower_field
from curvelift.lines import LineFamily, intersection_table
from curvelift.repair import ERASED, encode, erase


@pytest.fixture(scope="module")
def code():
    return build_code(CodePlan(norm_trace_curve(2, 3), LineFamily("all"), bound_B(2, 3)))


def test_field_roundtrip(tmp_path):
    for ctx in (tower_field(3, 3), make_field(7, 2), FieldCtx(3, 2, modulus=(2, 2, 1))):
        io.save_field(ctx, tmp_path / "f.json")
        assert io.load_field(tmp_path / "f.json") == ctx


def test_curve_roundtrip(tmp_path):
    ctx = make_field(2, 4)
    for c in (norm_trace_curve(3, 3), schmidt_curve(),
              custom_curve(ctx, {(5, 0): 1, (0, 4): 3, (0, 1): 1}, name="toy")):
        io.save_curve(c, tmp_path / "c.json")
        back = io.load_curve(tmp_path / "c.json")
        assert back.F == c.F and back.kind == c.kind


def test_code_roundtrip(tmp_path, code):
    io.save_code(code, tmp_path / "code.json")
    back = io.load_code(tmp_path / "code.json")
    assert np.array_equal(back.generator, code.generator)
    assert back.points.as_list() == code.points.as_list()
    assert back.plan.to_spec() == code.plan.to_spec()
    assert back.params == code.params
    w = encode(code, [1, 2, 3]).symbols
    assert membership_test(back, w)
    # saving again is byte-identical
    io.save_code(back, tmp_path / "code2.json")
    assert (tmp_path / "code.json").read_bytes() == (tmp_path / "code2.json").read_bytes()


def test_codeword_csv(tmp_path, code):
    cw = erase(encode(code, [4, 0, 7]), positions=[1, 5])
    io.save_codeword(cw, tmp_path / "w.csv")
    text = (tmp_path / "w.csv").read_text()
    header, row = text.splitlines()
    assert header.split(",")[0] == "s0" and row.split(",")[1] == io.ERASURE_TOKEN
    back = io.read_codeword_csv(tmp_path / "w.csv", code)
    assert np.array_equal(back, cw.symbols)
    assert (back[[1, 5]] == ERASED).all()


def test_codeword_csv_length_errors(tmp_path, code):
    (tmp_path / "bad.csv").write_text("s0,s1\n1,2,3\n")
    with pytest.raises(LengthMismatch):
        io.read_codeword_csv(tmp_path / "bad.csv")
    (tmp_path / "short.csv").write_text("s0,s1\n1,2\n")
    with pytest.raises(LengthMismatch):
        io.read_codeword_csv(tmp_path / "short.csv", code)
    (tmp_path / "empty.csv").write_text("")
    with pytest.raises(ValueError):
        io.read_csv(tmp_path / "empty.csv")


def test_intersection_csv_roundtrip(tmp_path):
    recs = intersection_table(norm_trace_curve(3, 3))
    (tmp_path / "t.csv").write_text(io.intersection_csv(recs))
    assert io.read_intersection_csv(tmp_path / "t.csv") == sorted(
        recs, key=lambda r: (r.norm_class, r.trace_class))


def test_dumps_numpy_and_order():
    s = io.dumps({"b": np.int64(3), "a": np.arange(3), "c": np.float64(0.5)})
    assert s.endswith("\n")
    assert list(json.loads(s)) == ["a", "b", "c"]
    with pytest.raises(TypeError):
        io.dumps({"x": object()})
