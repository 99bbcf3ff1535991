"""The acceptance gate: every criterion from the selftest suite must pass
within its runtime budget.  Each check prints its pass/fail line so a bare
``pytest -s tests/test_acceptance.py`` doubles as the readable report."""

import pytest

from torcycle import selftest


@pytest.mark.parametrize(
    "criterion",
    selftest.CRITERIA,
    ids=[fn.__name__ for fn in selftest.CRITERIA],
)
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.line()


def test_all_seven_present():
    assert len(selftest.CRITERIA) == 7
