"""Lanczos tridiagonalization and the spreading operator built on the Krylov basis.

The recursion uses full reorthogonalization against all previous Krylov
vectors, applied twice per step, which keeps the basis orthonormal to rounding
even for ill-conditioned spectra.  Iteration stops when the candidate
off-diagonal coefficient falls below ``tol * ||H||`` or the space is exhausted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import HermitianOperator, ValidationError, as_operator, as_state

LANCZOS_TOL = 1e-12


@dataclass(frozen=True)
class KrylovDecomposition:
    """Lanczos data: diagonal a, positive off-diagonal b, orthonormal basis rows.

    ``basis[n]`` is the n-th Krylov vector expressed in the original basis, so
    ``basis`` has shape (L, dim) with L = len(a) = len(b) + 1.
    """

    a: np.ndarray
    b: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        basis = np.asarray(self.basis, dtype=complex)
        if a.ndim != 1 or b.ndim != 1 or basis.ndim != 2:
            raise ValidationError("KrylovDecomposition fields have wrong ranks")
        if len(b) != len(a) - 1:
            raise ValidationError(f"expected len(b) = len(a) - 1, got {len(b)} and {len(a)}")
        if basis.shape[0] != len(a):
            raise ValidationError("basis row count must equal len(a)")
        if len(b) and np.min(b) <= 0.0:
            raise ValidationError("off-diagonal Lanczos coefficients must be positive")
        for arr in (a, b, basis):
            arr.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "basis", basis)

    @property
    def length(self):
        """Number of Krylov vectors L."""
        return len(self.a)

    @property
    def dim(self):
        return self.basis.shape[1]

    def tridiagonal(self):
        """The L x L Jacobi matrix with a on the diagonal and b off it."""
        T = np.diag(self.a).astype(float)
        idx = np.arange(len(self.b))
        T[idx, idx + 1] = self.b
        T[idx + 1, idx] = self.b
        return T

    def to_json_dict(self, include_basis=False):
        """JSON-serializable dict; basis is emitted as [re, im] pairs when asked."""
        out = {"a": self.a.tolist(), "b": self.b.tolist(), "L": int(self.length)}
        if include_basis:
            out["basis"] = [
                [[float(z.real), float(z.imag)] for z in row] for row in self.basis
            ]
        return out

    @classmethod
    def from_json_dict(cls, data):
        if not all(k in data for k in ("a", "b", "L")):
            raise ValidationError("Krylov JSON requires keys 'a', 'b', 'L'")
        a = np.asarray(data["a"], dtype=float)
        b = np.asarray(data["b"], dtype=float)
        if int(data["L"]) != len(a):
            raise ValidationError("stored L disagrees with len(a)")
        if "basis" in data:
            rows = data["basis"]
            basis = np.array([[complex(re, im) for re, im in row] for row in rows])
        else:
            # coefficients-only payload; basis is the standard one of the Jacobi matrix
            basis = np.eye(len(a), dtype=complex)
        return cls(a=a, b=b, basis=basis)


def lanczos(H, psi0, tol=LANCZOS_TOL):
    """Krylov decomposition of (H, psi0).

    Returns a, b and the Krylov vectors with basis[0] = psi0.  The three-term
    recursion is reorthogonalized against every previous vector twice per step.
    """
    if not tol > 0.0:
        raise ValidationError(f"tol must be positive, got {tol!r}")
    H = as_operator(H)
    psi0 = as_state(psi0, dim=H.dim, name="psi0")
    dim = H.dim
    hnorm = H.norm()
    mat = H.matrix

    V = np.empty((dim, dim), dtype=complex)
    a = np.empty(dim)
    b = np.empty(max(dim - 1, 0))

    V[0] = psi0
    w = mat @ psi0
    a[0] = np.vdot(psi0, w).real
    w = w - a[0] * psi0
    n = 0
    while True:
        for _ in range(2):
            overlaps = V[: n + 1].conj() @ w
            w = w - V[: n + 1].T @ overlaps
        bn = float(np.linalg.norm(w))
        if n + 1 == dim or bn < tol * hnorm or bn == 0.0:
            break
        b[n] = bn
        V[n + 1] = w / bn
        n += 1
        w = mat @ V[n]
        a[n] = np.vdot(V[n], w).real
        w = w - a[n] * V[n] - b[n - 1] * V[n - 1]
    return KrylovDecomposition(a=a[: n + 1].copy(), b=b[:n].copy(), basis=V[: n + 1].copy())


def spreading_operator(K, order=1):
    """Spreading operator sum_n n^order |K_n><K_n| in the original basis.

    order = 1 gives the usual position operator on the Krylov chain; higher
    orders weight the chain with n^order.  Returns a HermitianOperator.
    """
    if not isinstance(K, KrylovDecomposition):
        raise ValidationError("K must be a KrylovDecomposition")
    order = int(order)
    if order < 1:
        raise ValidationError(f"order must be at least 1, got {order}")
    weights = np.arange(K.length, dtype=float) ** order
    mat = (K.basis.T * weights) @ K.basis.conj()
    mat = 0.5 * (mat + mat.conj().T)
    return HermitianOperator(mat)
