import numpy as np
import pytest

from synchrokit import build_am, build_cerny
from synchrokit.series import build_cycle

BACKENDS = ("numba", "numpy")

_ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail):
    """Remember one acceptance line; printed in the terminal summary."""
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    _ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def am1():
    return build_am(1)


@pytest.fixture(scope="session")
def am2():
    return build_am(2)


@pytest.fixture(scope="session")
def cerny4():
    return build_cerny(4)


@pytest.fixture(scope="session")
def cycle3():
    return build_cycle(3)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_delta(rng, n, k):
    return rng.integers(0, n, size=(n, k)).tolist()
