import pytest

from squidprob.board import GameConfig
from squidprob.enumeration import enumerate_arrangements, occupancy_map

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def standard_set():
    return enumerate_arrangements(GameConfig(buffered=False))


@pytest.fixture(scope="session")
def buffered_set():
    return enumerate_arrangements(GameConfig(buffered=True))


@pytest.fixture(scope="session")
def arrangement_sets(standard_set, buffered_set):
    return {False: standard_set, True: buffered_set}


@pytest.fixture(scope="session")
def occupancy(arrangement_sets):
    return {b: occupancy_map(s) for b, s in arrangement_sets.items()}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
