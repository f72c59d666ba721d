"""Shared generators for randomized system tests."""

import numpy as np
import pytest


def random_hermitian(rng, dim, scale=1.0):
    """Dense Hermitian draw with independent Gaussian entries."""
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (raw + raw.conj().T) / 2.0


def random_state(rng, dim):
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def random_unitary(rng, dim):
    """Haar-distributed unitary via QR with the standard phase fix."""
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(raw)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240814)
