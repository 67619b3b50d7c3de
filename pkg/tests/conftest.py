import numpy as np
import pytest

from ch2lab import fixtures as fx
from ch2lab.spectral import Grid
from ch2lab.system import State, SystemParams

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def grid():
    return Grid(16, 1024)


@pytest.fixture(scope="session")
def small_grid():
    return Grid(8, 256)


@pytest.fixture(scope="session")
def params():
    return SystemParams(0.0, 1.0)


@pytest.fixture(scope="session")
def gauss_state(grid):
    return State(fx.gaussian(grid), fx.gaussian(grid))


@pytest.fixture(scope="session")
def strip_state(grid):
    return State(fx.sech2(grid, 0.1, 2.0), fx.gaussian(grid, 0.1))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
