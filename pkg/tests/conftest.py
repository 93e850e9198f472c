import time

import pytest

_LINES = []


class Criterion:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.start = time.perf_counter()

    def finish(self, ok, detail="", limit=None):
        elapsed = time.perf_counter() - self.start
        if limit is not None and elapsed >= limit:
            ok = False
            detail = f"{detail}; took {elapsed:.2f}s, limit {limit}s".lstrip("; ")
        line = f"{'PASS' if ok else 'FAIL'} criterion {self.number}: {self.title} ({elapsed:.2f}s)"
        if detail:
            line += f" - {detail}"
        _LINES.append(line)
        print(line)
        assert ok, line


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
