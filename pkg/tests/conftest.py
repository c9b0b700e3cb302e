import time

import pytest

_LINES = pytest.StashKey[dict]()


class Criterion:
    """Collects named sub-checks for one acceptance criterion and reports a single line."""

    def __init__(self, lines: dict, number: int, title: str, limit: float | None):
        self.lines, self.number, self.title, self.limit = lines, number, title, limit
        self.failed: list[str] = []
        self.notes: list[str] = []
        self.passed_count = 0

    def check(self, name: str, ok: bool) -> bool:
        if ok:
            self.passed_count += 1
        else:
            self.failed.append(name)
        return ok

    def note(self, text: str) -> None:
        self.notes.append(text)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failed.append(f"raised {exc_type.__name__}: {exc}")
        if self.limit is not None and elapsed >= self.limit:
            self.failed.append(f"runtime {elapsed:.1f}s over the {self.limit:.0f}s limit")
        ok = not self.failed
        detail = f"{self.passed_count} checks passed" if ok else "failed: " + "; ".join(self.failed)
        if self.notes:
            detail += " | " + "; ".join(self.notes)
        line = f"criterion {self.number:>2} {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s) {self.title}: {detail}"
        self.lines[self.number] = line
        print(line)
        if exc is None:
            assert ok, line
        return False


@pytest.fixture
def criterion(request):
    lines = request.config.stash.setdefault(_LINES, {})

    def make(number: int, title: str, limit: float | None = None) -> Criterion:
        return Criterion(lines, number, title, limit)

    return make


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
