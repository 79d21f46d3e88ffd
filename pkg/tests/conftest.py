import numpy as np
import pytest

from rough_elm import _accel
from rough_elm.rough import DecisionTable


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    """Run a test once per kernel backend."""
    if request.param == "numba" and not _accel.HAVE_NUMBA:
        pytest.skip("numba not installed")
    monkeypatch.setattr(_accel, "USE_NUMBA", request.param == "numba")
    return request.param


@pytest.fixture
def small_table():
    # a1=[0,0,1,1], a2=[0,0,0,1], d=[0,1,1,1]
    return DecisionTable(np.array([[0, 0], [0, 0], [1, 0], [1, 1]]), np.array([0, 1, 1, 1]))


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
