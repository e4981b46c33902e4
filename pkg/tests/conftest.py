from fractions import Fraction

import pytest

from threadskein.thread import from_gaps, line

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def T_A():
    return from_gaps(1, Fraction(1, 2), [("1/2", "5/8"), ("1/3", "19/48"), ("2/3", "67/96")])


@pytest.fixture
def T_LINE():
    return line(1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for text in ACCEPTANCE_LINES:
            terminalreporter.write_line(text)
