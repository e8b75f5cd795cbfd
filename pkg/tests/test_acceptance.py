"""Runs every acceptance criterion and prints one PASS/FAIL line for each.

``python tests/test_acceptance.py`` prints the lines without pytest.
"""

import os
from pathlib import Path

import pytest

from jetcalc.acceptance import CRITERIA, singular_observations

GOLDEN = Path(__file__).parent / "golden" / "singular_fibers.txt"


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.line()


def test_criteria_are_numbered_in_order():
    assert [c().ident for c in CRITERIA[:2]] == [1, 2]
    assert len(CRITERIA) == 11


def test_singular_fiber_observations_match_golden():
    text = singular_observations()
    if os.environ.get("JETCALC_UPDATE_GOLDEN") == "1":
        GOLDEN.write_text(text)
    assert GOLDEN.read_text() == text


if __name__ == "__main__":
    failed = 0
    for criterion in CRITERIA:
        result = criterion()
        print(result.line())
        failed += not result.passed
    raise SystemExit(1 if failed else 0)
