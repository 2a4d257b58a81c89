import json
import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).parent
sys.path.insert(0, str(TESTS))

ORACLE_FILE = TESTS / "data" / "oracle_points.json"


def _load():
    return json.loads(ORACLE_FILE.read_text())


@pytest.fixture(scope="session")
def oracle_data():
    return _load()


@pytest.fixture(scope="session")
def constants(oracle_data):
    return oracle_data["constants"]


def oracle_points(tag):
    """Pinned oracle points of one set, for parametrize at import time."""
    return [p for p in _load()["points"] if p["set"] == tag]


# acceptance criteria report: one line per criterion, printed after the run

_ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.fixture
def criterion(request):
    """``criterion(n, ok, detail)`` records the verdict and returns ``ok``."""
    lines = request.config.stash[_ACCEPTANCE]

    def report(n, ok, detail):
        lines[n] = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(lines[n])
        return ok
    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash[_ACCEPTANCE]
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
