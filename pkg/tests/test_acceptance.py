"""The ten acceptance criteria, one test each, at their stated tolerances."""

import pytest

from ruledsolitons.acceptance import CHECKS

RESULTS = {}


@pytest.mark.parametrize("check", CHECKS, ids=[f"AC{i}" for i in range(1, len(CHECKS) + 1)])
def test_criterion(check):
    result = check()
    RESULTS[result.number] = result
    print(result.line())
    assert result.passed, result.line()
