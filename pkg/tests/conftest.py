import pytest

from fracpq import Grid, Interval, PQConfig
from fracpq.threshold import build_context

UNIT = Interval(0.0, 1.0)


@pytest.fixture(scope="session")
def reference_config():
    return PQConfig(UNIT, 0.7, 3.0, 0.5, 2.0)


@pytest.fixture(scope="session")
def reference_grid():
    return Grid(UNIT, 32)


@pytest.fixture(scope="session")
def reference_context(reference_config, reference_grid):
    return build_context(reference_config, reference_grid)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
