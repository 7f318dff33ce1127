import os
import sys

os.environ.setdefault("LOG_FILE", "")
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from nodes.qstate import from_density_matrix

TETRAHEDRON = np.array([[-1, -1, -1], [-1, 1, 1], [1, -1, 1], [1, 1, -1]], dtype=float)


def random_density_matrix(rng: np.random.Generator, rank: int = 4) -> np.ndarray:
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_tetrahedron_points(rng: np.random.Generator, count: int) -> np.ndarray:
    return rng.dirichlet(np.ones(4), size=count) @ TETRAHEDRON


@pytest.fixture
def rng():
    return np.random.default_rng(20140101)


@pytest.fixture
def random_state(rng):
    def make():
        return from_density_matrix(random_density_matrix(rng))
    return make
