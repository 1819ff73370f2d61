"""Collects the acceptance criteria outcomes and prints one line per criterion."""

import pytest

_RESULTS = {}


def criterion(number, title):
    def mark(fn):
        fn.criterion = (number, title)
        return fn

    return mark


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    tag = getattr(getattr(item, "function", None), "criterion", None)
    if tag is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _RESULTS[tag] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), verdict in sorted(_RESULTS.items()):
        terminalreporter.write_line(f"criterion {number:2d}  {verdict}  {title}")
    passed = sum(v == "PASS" for v in _RESULTS.values())
    terminalreporter.write_line(f"{passed}/{len(_RESULTS)} criteria pass")
