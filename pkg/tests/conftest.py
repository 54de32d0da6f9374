import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aoicache.config import builtin_scenario  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def paper():
    return builtin_scenario("paper_iv")


@pytest.fixture(scope="session")
def desk():
    return builtin_scenario("desk")


@pytest.fixture(scope="session")
def tiny():
    return builtin_scenario("tiny")


@pytest.fixture(scope="session")
def acceptance():
    """Call with (criterion number, description, passed, detail); returns ``passed``."""

    def record(number, name, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number:>2}: {name} -- {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
