import pytest

from cevgreeks import DEFAULT_PARAMS, TimeGrid
from helpers import ACCEPTANCE_LINES


@pytest.fixture
def params():
    return DEFAULT_PARAMS


@pytest.fixture
def grid():
    return TimeGrid(1.0, 256)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
