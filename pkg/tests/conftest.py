import pytest
from hypothesis import settings

from treequot.corpus import ALPHABET, entry

ACCEPTANCE_LINES: list[str] = []

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")


@pytest.fixture(scope="session")
def alphabet():
    return ALPHABET


@pytest.fixture(scope="session")
def l1():
    return entry("L1").expr


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
