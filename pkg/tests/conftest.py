import math
import sys

import pytest

from maxsev import PeriodicFn, SemiStableLaw

LN2 = math.log(2.0)


@pytest.fixture
def canonical_h():
    return PeriodicFn(LN2, 1.0, [(1, 0.1, 0.0)])


@pytest.fixture
def frechet(canonical_h):
    return SemiStableLaw("frechet", 1.0, 2.0, canonical_h)


@pytest.fixture
def weibull(canonical_h):
    return SemiStableLaw("weibull", 1.0, 0.5, canonical_h)


@pytest.fixture
def std_frechet():
    return SemiStableLaw.max_stable("frechet", 1.0)


def pytest_terminal_summary(terminalreporter):
    lines = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
