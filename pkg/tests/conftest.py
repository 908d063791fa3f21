import numpy as np
import pytest


def crandn(rng, rows, cols):
    """Unit-variance circularly-symmetric complex Gaussian matrix."""
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def random_unitary(rng, n):
    q, r = np.linalg.qr(crandn(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_basis(rng, n, p):
    """Random p-dimensional orthonormal basis in C^n."""
    q, _ = np.linalg.qr(crandn(rng, n, p))
    return q


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
