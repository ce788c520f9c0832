import time

import numpy as np
import pytest
from hypothesis import settings

from quasi4.core import Quasigroup, add_mod4, compose, xor_sum
from quasi4.enumeration import enumerate_all

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# The worked example square, rows read as the first argument: f(0,.)=0123, f(1,.)=1032,
# f(2,.)=3201, f(3,.)=2310.  Stored with x1 fastest.
FIG2_ROWS = ["0123", "1032", "3201", "2310"]
FIG2_VALUES = [int(FIG2_ROWS[x1][x2]) for x2 in range(4) for x1 in range(4)]


@pytest.fixture
def fig2():
    return Quasigroup(2, FIG2_VALUES)


@pytest.fixture
def xor2():
    return xor_sum(2)


@pytest.fixture
def z4():
    return add_mod4(2)


@pytest.fixture
def mixed3():
    """(x1 xor x2) + x3 mod 4."""
    return compose(add_mod4(2), xor_sum(2))


@pytest.fixture(scope="session")
def all_cubes():
    """Every 3-quasigroup as one (55296, 64) uint8 array."""
    return np.array([q.values for q in enumerate_all(3)], dtype=np.uint8)


# -- acceptance summary ------------------------------------------------------

_RESULTS = []
_SETUP = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    # fixture setup (e.g. the shared exhaustive run) counts towards the first user
    if rep.when == "setup":
        _SETUP[item.nodeid] = rep.duration
        if rep.outcome != "passed":
            _RESULTS.append((marker.args[0], marker.args[1], rep.outcome, rep.duration))
    elif rep.when == "call":
        total = rep.duration + _SETUP.get(item.nodeid, 0.0)
        _RESULTS.append((marker.args[0], marker.args[1], rep.outcome, total))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, duration in sorted(_RESULTS):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}  ({duration:.1f} s)")


@pytest.fixture
def stopwatch():
    start = time.perf_counter()
    return lambda: time.perf_counter() - start
