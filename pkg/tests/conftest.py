import numpy as np
import pytest

from temop.series import TimeSeries


def random_walk(seed, n):
    rng = np.random.default_rng(seed)
    return TimeSeries(100.0 + np.cumsum(rng.normal(0.0, 1.0, n)))


@pytest.fixture
def walk_200():
    return random_walk(7, 200)


@pytest.fixture
def walk_4100():
    return random_walk(42, 4100)


_CRITERIA: dict[str, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion this test gates")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA.setdefault(marker.args[0], []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcomes in _CRITERIA.items():
        if "failed" in outcomes:
            status = "FAIL"
        elif all(o == "skipped" for o in outcomes):
            status = "SKIP"
        else:
            status = "PASS"
        terminalreporter.write_line(f"{status}  {name}")
