import pathlib

import pytest

from tightspace import fixtures

GRAPHS = pathlib.Path(__file__).resolve().parents[1] / "graphs"

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def G1():
    return fixtures.g1()


@pytest.fixture
def G1P():
    return fixtures.g1p()


@pytest.fixture
def G2():
    return fixtures.g2()


@pytest.fixture
def graphs_dir():
    return GRAPHS


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
