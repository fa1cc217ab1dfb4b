import numpy as np
import pytest

from s3polygons import moduli

ACCEPTANCE_LINES = []


def as_matrix(q):
    """2x2 complex SU(2) matrix of a quaternion (independent oracle)."""
    a, b, c, d = np.asarray(q, dtype=float)
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


def from_matrix(m):
    return np.array([m[0, 0].real, m[0, 0].imag, m[0, 1].real, m[0, 1].imag])


def pure_matrix(v):
    return as_matrix(np.concatenate([[0.0], v]))


def matrix_product(qs):
    m = np.eye(2, dtype=complex)
    for q in qs:
        m = m @ as_matrix(q)
    return m


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


@pytest.fixture
def closed5():
    return moduli.random_closed(5, seed=5)


@pytest.fixture
def square():
    # i * j * i * (-j) = 1
    return moduli.HolonomyTuple(np.array([[0, 1, 0, 0], [0, 0, 1, 0],
                                          [0, 1, 0, 0], [0, 0, -1, 0]], dtype=float))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
