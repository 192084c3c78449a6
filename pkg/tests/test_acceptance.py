"""Acceptance criteria 1-10, one check each, with a PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import pytest

from cayleywalk.verify import CHECKS, run_check


@pytest.mark.parametrize("key", [key for key, _, _ in CHECKS])
def test_criterion(key):
    result = run_check(key)
    status = "PASS" if result.ok else "FAIL"
    criterion = int(key[1:])
    print(f"\n[criterion {criterion:2d}] {status} {result.claim}: {result.detail} ({result.seconds:.2f}s)")
    assert result.ok, result.detail


def test_all_ten_criteria_covered():
    assert [key for key, _, _ in CHECKS] == [f"C{i}" for i in range(1, 11)]
