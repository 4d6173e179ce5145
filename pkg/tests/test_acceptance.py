"""The ten acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line; run with ``-s`` to see
them, or use ``quivar accept`` for the same lines plus a JSON report.
"""

from __future__ import annotations

import pytest

from quivar.acceptance import CRITERIA, run


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = run(number)
    print(res.line())
    assert res.passed, res.details


def test_all_ten_present():
    assert sorted(CRITERIA) == list(range(1, 11))
