from __future__ import annotations

import copy

import pytest

from curvelift.suites import SUITES, Scope, load_expectations, matches, run_suite


@pytest.mark.parametrize("name", SUITES)
def test_suite_passes(name):
    rep = run_suite(name, Scope(oracle=True))
    assert rep.checks
    assert rep.ok, [c.line() for c in rep.checks if not c.ok]


def test_budget_rows_skipped_by_default():
    rep = run_suite("table2", Scope())
    assert rep.skipped
    assert all(".r6" in s or ".r7" in s for s in rep.skipped)


def test_tampered_expectation_fails():
    exp = copy.deepcopy(load_expectations())
    entry = exp["binary"][0]
    entry["expected"] = "something else"
    rep = run_suite("binary", Scope(), exp)
    assert not rep.ok
    assert rep.checks[0].line().startswith("FAIL")


def test_idempotent():
    a = run_suite("ex33", Scope()).as_dict()
    b = run_suite("ex33", Scope()).as_dict()
    assert a == b


def test_matches_tolerance():
    assert matches(1.0, 1.05, 0.1)
    assert not matches(1.0, 1.2, 0.1)
    assert matches([1, 2], [1, 2], 0)
    assert not matches(True, 1, 0)
