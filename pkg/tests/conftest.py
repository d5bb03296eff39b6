import pytest

from sailkit.cf2d import cone_for_surd, quadratic
from sailkit.cone import cone_from_matrix
from sailkit.sail import invariant_sail_patch, sail_patch

CUBIC = [[1, 1, 1], [1, 2, 2], [1, 2, 3]]
FIB = [[2, 1], [1, 1]]
FIB_RAYS = [{"index": 0, "sign": -1}, {"index": 1, "sign": 1}]


def golden():
    return quadratic((-1, -1, 1), 1, 2)


def sqrt2():
    return quadratic((-2, 0, 1), 1, 2)


def sqrt3():
    return quadratic((-3, 0, 1), 1, 2)


@pytest.fixture(scope="session")
def cubic_cone():
    return cone_from_matrix(CUBIC)


@pytest.fixture(scope="session")
def cubic_patch(cubic_cone):
    return invariant_sail_patch(CUBIC, cubic_cone, 3)


@pytest.fixture(scope="session")
def fib_cone():
    return cone_from_matrix(FIB, rays=FIB_RAYS)


@pytest.fixture(scope="session")
def fib_patch(fib_cone):
    return sail_patch(fib_cone, 60)


@pytest.fixture(scope="session")
def golden_patch():
    return sail_patch(cone_for_surd(golden()), 64)


# --- acceptance summary ----------------------------------------------------------------

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "teardown":
        return
    n, title = mark.args
    _, ok, secs = _CRITERIA.get(n, (title, True, 0.0))
    # parametrized cases of one criterion pass only together
    _CRITERIA[n] = (title, ok and not rep.failed, secs + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok, secs = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}  ({secs:.1f} s)")
