import os
import time

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repro", derandomize=True, deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))

DEFAULT_SEED = 20240601


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=DEFAULT_SEED,
                     help="seed for the randomized property suites")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return np.random.default_rng(seed)


# -- acceptance reporting ----------------------------------------------------

_criteria = {}
_session_start = [None]


def pytest_sessionstart(session):
    _session_start[0] = time.perf_counter()


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    info = _criteria_by_node.get(report.nodeid)
    if info is not None:
        _criteria[info] = "PASS" if report.outcome == "passed" else "FAIL"


_criteria_by_node = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criteria_by_node[item.nodeid] = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for (n, text), outcome in sorted(_criteria.items()):
        tr.write_line(f"criterion {n:>2}: {outcome}  {text}")
    elapsed = time.perf_counter() - _session_start[0]
    verdict = "PASS" if elapsed < 300 else "FAIL"
    tr.write_line(f"full session wall time {elapsed:.1f} s (bound 300 s): {verdict}")
