from fractions import Fraction

import pytest
from hypothesis import settings, HealthCheck

from padicfs.series import FSeriesSpec
from padicfs.scalars import symbol

settings.register_profile("padicfs", derandomize=True, deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("padicfs")

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = {}


def record(criterion, ok, detail):
    line = "%s %s: %s" % (criterion, "PASS" if ok else "FAIL", detail)
    ACCEPTANCE_LINES.setdefault(criterion, []).append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (len(k), k)):
        for line in ACCEPTANCE_LINES[key]:
            terminalreporter.write_line(line)


@pytest.fixture
def chi3():
    return FSeriesSpec(2, [Fraction(1, 2), Fraction(3, 2)], [0, Fraction(1, 2)])


@pytest.fixture
def chiq():
    q = symbol("q")
    return FSeriesSpec(2, [Fraction(1, 2), q / 2], [0, Fraction(1, 2)])


@pytest.fixture
def s45():
    """sum_n 5^{#1([z]_{2^n})} / 4^n."""
    return FSeriesSpec(2, [Fraction(1, 4), Fraction(5, 4)], [1, 1])
