import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from brace_forge.heisenberg import build_heisenberg_brace, census_operators
from brace_forge.rota_baxter import adjoint_action

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=150, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def heis():
    return build_heisenberg_brace(3)


@pytest.fixture(scope="session")
def heis_action(heis):
    return adjoint_action(heis[0])


@pytest.fixture(scope="session")
def operators():
    return census_operators(3)


@pytest.fixture(scope="session")
def enhanced_ops(operators):
    return [rbo for _, _, rbo in operators if rbo.enhanced]


@pytest.fixture(scope="session")
def plain_ops(operators):
    """Operators that are relative but not enhanced."""
    return [rbo for _, _, rbo in operators if not rbo.enhanced]


def perturb(table, where, value=None):
    """Copy of ``table`` with one entry changed (to the next value mod n by default)."""
    t = np.array(table, copy=True)
    n = t.shape[-1] if value is None else None
    t[where] = (t[where] + 1) % n if value is None else value
    return t


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for result in sorted(results, key=lambda r: r.number):
            terminalreporter.write_line(result.line(timing=True))
