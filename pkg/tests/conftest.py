"""Shared fixtures plus the acceptance-criteria summary hook."""
from __future__ import annotations

import pytest

_ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(num, desc): top-level acceptance criterion"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    num, desc = marker.args
    _ACCEPTANCE_RESULTS[num] = (("PASS" if report.passed else "FAIL"), desc)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE_RESULTS):
        status, desc = _ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"criterion {num}: {status} - {desc}")
