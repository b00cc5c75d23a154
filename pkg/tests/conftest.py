from functools import lru_cache

import pytest

from cyclicfact.counting import GroupAnalysis
from cyclicfact.families import build

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def group(spec: str):
    return build(spec)


@lru_cache(maxsize=None)
def analysis(spec: str) -> GroupAnalysis:
    return GroupAnalysis(group(spec))


@pytest.fixture
def record_acceptance():
    """Collects one PASS/FAIL line per acceptance check for the session summary."""

    def _record(label: str, passed: bool, detail: str) -> None:
        line = f"{'PASS' if passed else 'FAIL'} [{label}] {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
