import numpy as np
import pytest

from locgame import _kernels_numpy
from locgame.graph import GnpParams, sample_gnp

ACCEPTANCE_LINES = []

try:
    from locgame import _kernels_numba
except ImportError:  # pragma: no cover
    _kernels_numba = None

BACKENDS = [_kernels_numpy] + ([_kernels_numba] if _kernels_numba is not None else [])


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit("_", 1)[-1])
def backend(request):
    return request.param


@pytest.fixture
def gnp():
    def make(n, p, seed=0):
        return sample_gnp(GnpParams(n, p, seed))
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_record():
    def record(number, passed, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
