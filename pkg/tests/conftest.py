import sys
from pathlib import Path

import pytest

from blossom import _kernels

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(params=sorted(_kernels.backends()))
def backend(request):
    """Each importable kernel backend in turn."""
    return _kernels.backends()[request.param]


@pytest.fixture
def fixtures_dir():
    return FIXTURES


_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


class Criterion:
    """Records one acceptance criterion's verdict for the end-of-run summary."""

    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.details: list[str] = []

    def note(self, text: str) -> None:
        self.details.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        ok = exc_type is None
        if exc_type is AssertionError and exc is not None and str(exc):
            self.details.append(str(exc).splitlines()[0])
        _ACCEPTANCE[self.number] = (self.title, ok, "; ".join(self.details))
        return False


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, details = _ACCEPTANCE[number]
        line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}"
        if details:
            line += f" ({details})"
        terminalreporter.write_line(line)
