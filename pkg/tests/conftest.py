"""Collects acceptance-criterion outcomes and prints one PASS/FAIL line each."""

import pytest

_RESULTS: dict[str, list[str]] = {}
_TITLES: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            num, title = mark.args
            _TITLES[f"AC{num}"] = title


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _RESULTS.setdefault(value, []).append(report.outcome)


@pytest.fixture(autouse=True)
def _tag_criterion(request, record_property):
    mark = request.node.get_closest_marker("criterion")
    if mark:
        record_property("criterion", f"AC{mark.args[0]}")


def pytest_terminal_summary(terminalreporter):
    if not _TITLES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_TITLES, key=lambda k: int(k[2:])):
        outcomes = _RESULTS.get(key, [])
        ok = bool(outcomes) and all(o == "passed" for o in outcomes)
        verdict = "PASS" if ok else "FAIL" if outcomes else "NOT RUN"
        terminalreporter.write_line(f"{key} {verdict}  {_TITLES[key]}")
