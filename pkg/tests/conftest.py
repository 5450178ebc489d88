from pathlib import Path

import pytest

from rai.harness import SYNTHETIC_MEANS, SYNTHETIC_SIZES
from rai.instance import build_instance

DATA = Path(__file__).parent / "data"


@pytest.fixture
def ratings_path():
    return DATA / "ratings_fixture.csv"


@pytest.fixture
def synthetic():
    """The ten-arm 3/5/2 synthetic instance with r=(2,2,0)."""
    return build_instance(SYNTHETIC_MEANS, SYNTHETIC_SIZES, (2, 2, 0))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
