"""Shared pytest configuration.

Acceptance tests carry ``@pytest.mark.criterion(n)``; after the run one line
per criterion is printed.  A criterion passes only if every test tagged with
it passed; an expected failure counts as a failure of the criterion.
"""

from __future__ import annotations

from collections import defaultdict

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_OUTCOMES = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    if rep.when == "call":
        ok = rep.passed and not hasattr(rep, "wasxfail")
        _OUTCOMES[n].append((item.name, ok))
    elif rep.when == "setup" and not rep.passed:
        _OUTCOMES[n].append((item.name, False))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        rows = _OUTCOMES[n]
        ok = all(r[1] for r in rows)
        failed = [name for name, good in rows if not good]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} ({len(rows) - len(failed)}/{len(rows)} tests)"
        if failed:
            line += "  failing: " + ", ".join(failed)
        tr.write_line(line)
