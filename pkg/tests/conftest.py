import itertools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# lines recorded by the acceptance tests, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


# brute-force oracles shared by the unit tests


def brute_signed(values, k, l):
    """``kX - lX`` by enumerating every ordered tuple."""
    values = [Fraction(v) for v in values]
    out = set()
    for plus in itertools.product(values, repeat=k):
        for minus in itertools.product(values, repeat=l):
            out.add(sum(plus, Fraction(0)) - sum(minus, Fraction(0)))
    return out


def brute_product(values, k):
    out = set()
    for combo in itertools.product([Fraction(v) for v in values], repeat=k):
        p = Fraction(1)
        for x in combo:
            p *= x
        out.add(p)
    return out


@pytest.fixture
def oracle():
    return {"signed": brute_signed, "product": brute_product}
