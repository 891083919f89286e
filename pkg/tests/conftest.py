import pytest
from hypothesis import HealthCheck, settings

from tracering.presentation import load_c33_generators
from tracering.reduction import Reducer, default_rule, solve_reduction

# every property runs exactly 100 derandomized cases
settings.register_profile(
    "props", max_examples=100, derandomize=True, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("props")


@pytest.fixture(scope="session")
def rule2():
    return solve_reduction(2)


@pytest.fixture(scope="session")
def rule3():
    return default_rule(3)


@pytest.fixture(scope="session")
def c33():
    return load_c33_generators(diagonal_first=True)


@pytest.fixture(scope="session")
def reducer3(rule3, c33):
    return Reducer(rule3, c33)


# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
