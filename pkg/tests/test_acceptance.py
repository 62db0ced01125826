"""Acceptance gate: one pass/fail line per criterion (run with ``-s`` to see them)."""

import pytest

from steerwave.acceptance import run_all

pytestmark = pytest.mark.acceptance


@pytest.fixture(scope="module")
def results():
    return {res.number: res for res in run_all(seed=0)}


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(results, number):
    res = results[number]
    print("\n" + res.line())
    for check in res.checks:
        print("        " + check.describe())
    assert res.passed, res.line()


def test_runtime_budgets(results):
    # partition sweep within 5 s; 50-trial Parseval/reconstruction within 60 s
    assert results[1].seconds < 5
    assert results[2].seconds + results[3].seconds < 60
