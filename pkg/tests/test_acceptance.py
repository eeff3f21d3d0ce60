"""The twelve acceptance criteria, one test each, at their stated tolerances.

Each test prints a single pass/fail line.  ``python3 -m schreier selftest``
runs the same checks from the command line.
"""

import pytest

from schreier.acceptance import CHECKS, run_all


@pytest.mark.parametrize("number", range(1, len(CHECKS) + 1), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number, capsys):
    (res,) = run_all({number})
    with capsys.disabled():
        print("\n" + res.line())
    assert res.id == number
    assert res.passed, res.detail


def test_there_are_twelve_criteria():
    assert len(CHECKS) == 12
