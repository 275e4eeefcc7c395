"""Shared pytest plumbing: the acceptance-criterion result banner.

test_acceptance.py registers one line per criterion via record_criterion();
the terminal-summary hook prints them in a dedicated section so a CI log
shows the verdicts at a glance even when the run is otherwise noisy.
"""

from __future__ import annotations

_RESULTS: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    _RESULTS[number] = (ok, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        ok, detail = _RESULTS[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"CRITERION {number}: {verdict} - {detail}")
