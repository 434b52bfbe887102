"""One test per acceptance criterion; each result line is echoed in the terminal summary."""
import io as stdio
import time

import pytest

from brace_forge.acceptance import TIME_BUDGET, CriterionResult, Workspace, run_criterion
from brace_forge.cli import run

RESULTS: list[CriterionResult] = []

# per-criterion runtime ceilings in seconds, where one is stated
LIMITS = {1: 10.0, 2: 60.0}


@pytest.fixture(scope="module")
def workspace():
    return Workspace()


def record(result: CriterionResult) -> CriterionResult:
    RESULTS.append(result)
    print(result.line(timing=True))
    return result


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number, workspace):
    result = record(run_criterion(number, workspace))
    assert result.ok, result.line()
    if number in LIMITS:
        assert result.elapsed < LIMITS[number]


def test_criterion_10_selftest_end_to_end():
    stream = stdio.StringIO()
    start = time.perf_counter()
    code = run(["selftest"], stream)
    elapsed = time.perf_counter() - start
    lines = stream.getvalue().splitlines()
    ok = code == 0 and elapsed < TIME_BUDGET and len(lines) == 10
    record(CriterionResult(10, "selftest", ok, f"exit {code}, {len(lines)} lines, budget {TIME_BUDGET:.0f}s",
                           elapsed))
    assert code == 0
    assert all("PASS" in line for line in lines)
    assert elapsed < TIME_BUDGET
