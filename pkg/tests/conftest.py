import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_LINES: dict[str, str] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; the test still fails through its own assert."""

    def record(cid: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} {cid}: {detail}"
        _LINES[cid] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_LINES, key=lambda c: int(c.split("-")[1])):
        terminalreporter.write_line(_LINES[cid])
