import numpy as np
import pytest

from jordancr.algebra import parse_algebra

MODEL_NAMES = ["r", "r^3", "sym2", "sym3", "spin4", "sum(sym2,r)"]


@pytest.fixture(params=MODEL_NAMES)
def model(request):
    return parse_algebra(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def circle_orientation(a, b, c):
    """+1 if the circle points a, b, c are in counterclockwise order, else -1."""
    ab = np.mod(np.angle(b) - np.angle(a), 2 * np.pi)
    ac = np.mod(np.angle(c) - np.angle(a), 2 * np.pi)
    return np.where(ab < ac, 1, -1)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
