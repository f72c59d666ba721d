"""Dense Hermitian linear algebra: validation, spectral decomposition, exact evolution.

States are plain complex numpy vectors normalized to unit norm.  Operators are
wrapped in :class:`HermitianOperator`, which validates hermiticity once and
caches its spectral decomposition so that repeated evolutions over a time grid
cost a single diagonalization.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

# Relative tolerance for hermiticity and normalization checks.
HERMITICITY_TOL = 1e-12
STATE_NORM_TOL = 1e-12


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


class NumericalError(RuntimeError):
    """Raised when an underlying numerical routine fails to converge."""


class SpectralDecomposition(NamedTuple):
    """Eigenvalues in ascending order and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_state(psi, dim=None, name="state"):
    """Coerce to a complex vector and check unit normalization.

    Raises ValidationError if the norm deviates from 1 by more than
    STATE_NORM_TOL (relative) or the dimension does not match ``dim``.
    """
    vec = np.asarray(psi, dtype=complex)
    if vec.ndim != 1:
        raise ValidationError(f"{name} must be a vector, got shape {vec.shape}")
    if dim is not None and vec.shape[0] != dim:
        raise ValidationError(f"{name} has dimension {vec.shape[0]}, operator expects {dim}")
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > STATE_NORM_TOL * max(1.0, norm):
        raise ValidationError(f"{name} is not normalized: ||psi|| = {norm!r}")
    return vec


class HermitianOperator:
    """Dense Hermitian matrix with a lazily cached spectral decomposition."""

    def __init__(self, entries, tol=HERMITICITY_TOL):
        mat = np.asarray(entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValidationError(f"operator must be square, got shape {mat.shape}")
        scale = np.max(np.abs(mat)) if mat.size else 0.0
        dev = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
        if dev > tol * max(scale, 1e-300):
            raise ValidationError(
                f"matrix is not Hermitian: max |H - H^dag| = {dev!r} exceeds {tol!r} * max|H_ij|"
            )
        # symmetrize the rounding-level residue and freeze the buffer
        mat = 0.5 * (mat + mat.conj().T)
        mat.setflags(write=False)
        self._matrix = mat
        self._spectral = None

    @property
    def matrix(self):
        return self._matrix

    @property
    def dim(self):
        return self._matrix.shape[0]

    def spectral(self):
        """Eigendecomposition, computed once and cached."""
        if self._spectral is None:
            try:
                evals, evecs = np.linalg.eigh(self._matrix)
            except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
                raise NumericalError(f"eigensolver failed to converge: {exc}") from exc
            evals.setflags(write=False)
            evecs.setflags(write=False)
            self._spectral = SpectralDecomposition(evals, evecs)
        return self._spectral

    def norm(self):
        """Operator (spectral) norm, max |eigenvalue|."""
        evals = self.spectral().eigenvalues
        if evals.size == 0:
            return 0.0
        return float(max(abs(evals[0]), abs(evals[-1])))

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


def as_operator(H):
    """Accept a HermitianOperator or anything coercible to one."""
    if isinstance(H, HermitianOperator):
        return H
    return HermitianOperator(H)


def eigendecompose(H):
    """Spectral decomposition of a Hermitian operator.

    Returns eigenvalues ascending and orthonormal eigenvectors as columns;
    H = V diag(w) V^dag holds to rounding.
    """
    return as_operator(H).spectral()


def operator_norm(H):
    """Largest absolute eigenvalue."""
    return as_operator(H).norm()


def evolve(H, psi, t):
    """Evolved state exp(-i H t) psi via the cached spectral decomposition."""
    H = as_operator(H)
    psi = as_state(psi, dim=H.dim)
    evals, evecs = H.spectral()
    coeff = evecs.conj().T @ psi
    return evecs @ (np.exp(-1j * evals * t) * coeff)


def evolve_grid(H, psi, times):
    """States exp(-i H t) psi for every t in ``times``; returns shape (T, dim)."""
    H = as_operator(H)
    psi = as_state(psi, dim=H.dim)
    times = np.asarray(times, dtype=float)
    evals, evecs = H.spectral()
    coeff = evecs.conj().T @ psi
    phases = np.exp(-1j * np.outer(times, evals))  # (T, dim)
    return (phases * coeff) @ evecs.T


def expectation(H, psi):
    """Real expectation value <psi|H|psi> of a Hermitian operator."""
    H = as_operator(H)
    psi = as_state(psi, dim=H.dim)
    return float(np.vdot(psi, H.matrix @ psi).real)
