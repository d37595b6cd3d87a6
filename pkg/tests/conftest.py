import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

SUITE_BUDGET_S = 300.0
_criteria = {}
_start = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion covered by the test")


def pytest_sessionstart(session):
    _start["t"] = time.perf_counter()


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for n in getattr(report, "criteria", ()):
        _criteria.setdefault(n, []).append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.criteria = tuple(m.args[0] for m in item.iter_markers("criterion"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criteria:
        return
    elapsed = time.perf_counter() - _start.get("t", time.perf_counter())
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        ok = all(_criteria[n])
        tr.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'} ({len(_criteria[n])} test(s))")
    ok = elapsed < SUITE_BUDGET_S
    tr.write_line(f"criterion 13 suite wall time {elapsed:.1f}s < {SUITE_BUDGET_S:.0f}s: {'PASS' if ok else 'FAIL'}")


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _start.get("t", time.perf_counter())
    if _criteria and elapsed >= SUITE_BUDGET_S and session.exitstatus == 0:
        session.exitstatus = 1
