from __future__ import annotations

import os
import sys
import time
from contextlib import contextmanager

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Time a block, record one PASS/FAIL line, and fail if it overruns ``limit`` seconds."""

    @contextmanager
    def run(number: int, title: str, limit: float):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            within = elapsed < limit
            status = "PASS" if ok and within else "FAIL"
            line = f"criterion {number}: {status}  {title}  ({elapsed:.2f}s, limit {limit:g}s)"
            _ACCEPTANCE_LINES.append(line)
            print(line)
        assert within, f"criterion {number} took {elapsed:.2f}s, limit {limit:g}s"

    return run


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
