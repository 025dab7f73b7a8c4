"""Shared fixtures: the acceptance ledger printed at the end of the run."""

import os

import pytest

ACCEPTANCE: list = []

LONG = os.environ.get("KUMMERLAB_LONG", "")


def record(criterion: str, ok: bool, detail: str = "") -> None:
    """Log one acceptance line and fail the test when ok is false."""
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


@pytest.fixture
def accept():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
