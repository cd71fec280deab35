"""Collects one verdict line per acceptance criterion and prints them at the end."""

import re

_VERDICTS = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        detail = dict(report.user_properties).get("summary", "")
        _VERDICTS[int(m.group(1))] = (m.group(2), report.outcome, detail, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_VERDICTS):
        name, outcome, detail, secs = _VERDICTS[num]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(
            f"criterion {num} {verdict} {name.replace('_', ' ')}: {detail} [{secs:.1f}s]")
