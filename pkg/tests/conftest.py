import numpy as np
import pytest

from hdatail import BivariateSample


def brute_antiranks(pairs, reference):
    """O(n^2) reference counts ``#{j: ref[j] >= x[i]}`` for both components."""
    pairs = np.asarray(pairs, dtype=np.float64)
    if reference == "min":
        ref = pairs.min(axis=1)
    elif reference == "max":
        ref = pairs.max(axis=1)
    else:
        ref = pairs[:, 1]
    n = len(pairs)
    r1 = np.array([sum(1 for j in range(n) if ref[j] >= pairs[i, 0]) for i in range(n)])
    r2 = np.array([sum(1 for j in range(n) if ref[j] >= pairs[i, 1]) for i in range(n)])
    return r1, r2


@pytest.fixture
def three_point():
    return BivariateSample(np.array([[3.0, 1.0], [2.0, 5.0], [4.0, 4.0]]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    lines = getattr(terminalreporter.config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def pytest_configure(config):
    config._acceptance_lines = []
