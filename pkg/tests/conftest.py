"""Shared fixtures and the acceptance-criterion summary.

Tests tagged ``@pytest.mark.criterion(n, label)`` are grouped by criterion
number; after the run one PASS/FAIL line is printed per sub-check and per
criterion.
"""

import os
from collections import OrderedDict

import pytest

os.environ["EITSIM_ALWAYS_CHECK"] = "1"

import eitsim.mna  # noqa: E402

_results = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, label): acceptance criterion sub-check")
    # every nodal solve in the suite runs the KCL and Tellegen checks
    eitsim.mna.ALWAYS_CHECK = True


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    n, label = crit
    _results.setdefault(n, OrderedDict())[label] = report.outcome


@pytest.fixture(autouse=True)
def _record_criterion(request):
    m = request.node.get_closest_marker("criterion")
    if m is not None:
        request.node.user_properties.append(("criterion", tuple(m.args)))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_results):
        subs = _results[n]
        ok = all(v == "passed" for v in subs.values())
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}")
        for label, outcome in subs.items():
            tr.write_line(f"    {'PASS' if outcome == 'passed' else 'FAIL'}  {label}")
