"""Suite-wide configuration: the acceptance marker and its summary lines."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line(
        "markers", "acceptance(name): marks a test as one acceptance criterion"
    )


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    """One PASS/FAIL line per acceptance criterion, independent of capture."""
    lines: list[str] = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            marker = getattr(report, "acceptance_name", None)
            if marker:
                verdict = "PASS" if outcome == "passed" else "FAIL"
                lines.append(f"ACCEPTANCE {verdict}: {marker}")
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        marker = item.get_closest_marker("acceptance")
        if marker and marker.args:
            report.acceptance_name = marker.args[0]
