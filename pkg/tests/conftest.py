from __future__ import annotations

import pytest

_ACCEPTANCE: dict[int, tuple[bool, str, str]] = {}


@pytest.fixture
def criterion():
    """Record the outcome of a numbered acceptance criterion.

    ``criterion(n, title, ok, detail)`` prints a PASS/FAIL line immediately and
    again in the terminal summary, then asserts ``ok``.
    """

    def record(n: int, title: str, ok: bool, detail: str = "") -> None:
        _ACCEPTANCE[n] = (bool(ok), title, detail)
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {n:2d}: {title} | {detail}")
        assert ok, f"criterion {n} failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, title, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {title} | {detail}")
