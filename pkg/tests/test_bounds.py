from __future__ import annotations

from decimal import Decimal, getcontext
from math import floor, gcd

import pytest
from hypothesis import given, strategies as st

from curvelift.bounds import (bound_B, floor_bound, trace_branch_bounds, uniform_bound,
                              verify_lower_bounds)
from curvelift.curves import norm_trace_curve
from curvelift.errors import InvalidExtensionDegree

getcontext().prec = 80


def _floor_decimal(q, r, C, c0):
    v = Decimal(q) ** (r - 1) - C * Decimal(q).sqrt() ** (r - 2) - c0
    return floor(v)


@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 25]), st.integers(2, 9), st.integers(0, 60),
       st.integers(0, 1))
def test_floor_bound_exact(q, r, C, c0):
    assert floor_bound(q, r, C, c0) == _floor_decimal(q, r, C, c0)


@pytest.mark.parametrize("q,r,B,Bp", [(3, 3, 1, 4), (3, 4, 8, 14), (7, 3, 16, 16), (5, 4, 64, 64),
                                      (5, 3, 6, 10), (3, 5, 38, 59)])
def test_table_values(q, r, B, Bp):
    assert bound_B(q, r) == B
    assert bound_B(q, r, refined=True) == Bp


@pytest.mark.parametrize("r", range(2, 9))
def test_binary_B(r):
    assert bound_B(2, r) == 2 ** (r - 1) - 1


def test_branch_and_uniform_shapes():
    q, r = 5, 4
    br = trace_branch_bounds(q, r)
    assert br["trace-zero"] == q ** 3 - (r - 1) * (q - 1) * q
    assert br["trace-nonzero"] == q ** 3 - (gcd(r, q - 1) - 1 + (r - 1) * (q - 2)) * q - 1
    assert uniform_bound(q, r) == q ** 3 - (r - 1) * (q - 1) * q - 1


@pytest.mark.parametrize("q,r", [(2, 3), (2, 4), (3, 3), (3, 4), (4, 2), (5, 3), (7, 2)])
def test_bounds_hold_empirically(q, r):
    rep = verify_lower_bounds(norm_trace_curve(q, r))
    assert rep.ok
    assert all(row["uniform_slack"] >= 0 for row in rep.rows)


def test_empirical_minima():
    assert min(verify_lower_bounds(norm_trace_curve(3, 3)).minimum.values()) == 7
    assert min(verify_lower_bounds(norm_trace_curve(2, 4)).minimum.values()) == 7
    assert min(verify_lower_bounds(norm_trace_curve(5, 3)).minimum.values()) == 21


def test_invalid_degree():
    with pytest.raises(InvalidExtensionDegree):
        bound_B(3, 1)
    with pytest.raises(InvalidExtensionDegree):
        floor_bound(3, 0, 1, 1)
