import numpy as np
import pytest
from hypothesis import strategies as st

from markovlaws import binary_transfer, validate_transfer
from markovlaws.fixtures import binary_demo_matrix, hidden_demo_matrix

P_X, Q_X = 0.6232, 0.6335
GRID = (0.1, 0.3, 0.5, 0.7, 0.9)


@pytest.fixture(scope="session")
def tx():
    return binary_demo_matrix()


@pytest.fixture(scope="session")
def ty():
    return hidden_demo_matrix()


def random_transfer(rng, dim):
    m = rng.random((dim, dim)) + 1e-3
    return validate_transfer(m / m.sum(axis=0))


@st.composite
def transfer_matrices(draw, min_dim=2, max_dim=4):
    dim = draw(st.integers(min_dim, max_dim))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_transfer(np.random.default_rng(seed), dim)


def binary_grid():
    return [(p, q) for p in GRID for q in GRID]


def binary(p, q):
    return binary_transfer(p, q)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
