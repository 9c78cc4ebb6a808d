"""Shared pytest setup.

Hypothesis runs derandomized unless a seed is passed with --hypothesis-seed.
Acceptance results are collected through the `acceptance` fixture and
printed one line each at the end of the run.
"""

import pytest
from hypothesis import settings

settings.register_profile("fixed", derandomize=True, max_examples=60, deadline=None)
settings.register_profile("seeded", derandomize=False, max_examples=60, deadline=None)

_LINES: list[str] = []


def pytest_configure(config):
    seeded = config.getoption("hypothesis_seed", default=None) is not None
    settings.load_profile("seeded" if seeded else "fixed")


@pytest.fixture
def acceptance():
    def record(label: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
        _LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
