import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        number, title = mark.args
        _CRITERIA.setdefault(number, {"title": title, "seconds": 0.0})
        _CRITERIA[number]["seconds"] += time.perf_counter() - start


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for number, entry in _CRITERIA.items():
        if report.nodeid.endswith(entry.get("nodeid", "\0")):
            entry["passed"] = report.passed


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _CRITERIA.setdefault(number, {"title": title, "seconds": 0.0})
            _CRITERIA[number]["nodeid"] = item.nodeid


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = {True: "PASS", False: "FAIL"}.get(entry.get("passed"), "NOT RUN")
        terminalreporter.write_line(
            f"criterion {number:2d} {status:7s} {entry['seconds']:7.2f}s  {entry['title']}"
        )
