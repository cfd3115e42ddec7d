"""Shared fixtures and the acceptance-criterion summary.

Tests tagged ``@pytest.mark.criterion("name")`` are grouped by name; after
the run one PASS/FAIL line is printed per criterion.
"""

from collections import OrderedDict

import pytest

_results = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): test belongs to a named acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            _results.setdefault(m.args[0], [])


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = _criterion_of(report)
    if name is not None:
        _results.setdefault(name, []).append((report.nodeid, report.outcome))


_item_criteria = {}


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m:
        _item_criteria[item.nodeid] = m.args[0]


def _criterion_of(report):
    return _item_criteria.get(report.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcomes in _results.items():
        if not outcomes:
            status = "NOT RUN"
        elif all(o == "passed" for _, o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        failed = [nid.split("::")[-1] for nid, o in outcomes if o != "passed"]
        extra = f"  (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"{status:7s} {name}{extra}")
