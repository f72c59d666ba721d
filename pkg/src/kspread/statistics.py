"""Measurement statistics of the spreading operator along an evolved state.

Everything here consumes a :class:`SpreadProfile`: the amplitudes
phi_n(t) = <K_n|exp(-iHt)|psi0> on a time grid together with the weights
p_n(t) = |phi_n(t)|^2.  The weights form a probability distribution over the
Krylov chain position n, and the moments, characteristic function, generating
function, entropy and echo defined below are ordinary statistics of that
distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .lanczos import KrylovDecomposition, spreading_operator
from .linalg import (
    HermitianOperator,
    ValidationError,
    as_operator,
    as_state,
    evolve,
    evolve_grid,
)

# Largest moment order exposed through the public API.
MAX_ORDER = 6
# Truncation order of the moment-series route to the characteristic function.
CHARFUN_SERIES_ORDER = 12
# Completeness tolerance for sum_n p_n(t) = 1.
PROBABILITY_TOL = 1e-10
# Relative spectral-gap floor below which long-time averages are refused.
DEGENERACY_TOL = 1e-10

_FD_DEFAULT_STEP = {1: 1e-3, 2: 3e-3, 3: 1e-2, 4: 1e-2, 5: 3e-2, 6: 3e-2}


@dataclass(frozen=True)
class SpreadProfile:
    """Amplitudes and weights of the Krylov-chain distribution on a time grid.

    times has shape (T,), phi and p have shape (T, L).  The decomposition the
    profile was built from is kept so downstream consumers (bounds, refinement)
    can recompute weights at new times.
    """

    times: np.ndarray
    phi: np.ndarray
    p: np.ndarray
    krylov: KrylovDecomposition

    @property
    def length(self):
        return self.p.shape[1]

    def index_of(self, t_index):
        idx = int(t_index)
        if idx < 0 or idx >= len(self.times):
            raise ValidationError(
                f"t_index {t_index} out of range for grid of {len(self.times)} times"
            )
        return idx


@dataclass(frozen=True)
class SpreadDistribution:
    """Weights over chain position n at one fixed time."""

    t: float
    weights: np.ndarray


def _check_time_grid(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValidationError("times must be a nonempty 1-d grid")
    if times.size > 1 and np.min(np.diff(times)) <= 0.0:
        raise ValidationError("times must be strictly increasing")
    return times


def spread_profile(K, H, psi0, times):
    """Amplitude profile phi_n(t) = <K_n|exp(-iHt)|psi0> over a time grid.

    K must be the decomposition of (H, psi0); this is validated by checking
    basis[0] against psi0 and that the weights exhaust the state at every t.
    """
    if not isinstance(K, KrylovDecomposition):
        raise ValidationError("K must be a KrylovDecomposition")
    H = as_operator(H)
    psi0 = as_state(psi0, dim=H.dim, name="psi0")
    times = _check_time_grid(times)
    if K.dim != H.dim:
        raise ValidationError("Krylov basis dimension does not match the operator")
    if abs(abs(np.vdot(K.basis[0], psi0)) - 1.0) > 1e-10:
        raise ValidationError("K.basis[0] is not psi0: decomposition belongs to a different state")

    states = evolve_grid(H, psi0, times)  # (T, dim)
    phi = states @ K.basis.conj().T  # phi[t, n] = <K_n|Psi(t)>
    p = np.abs(phi) ** 2
    defect = np.max(np.abs(p.sum(axis=1) - 1.0))
    if defect > PROBABILITY_TOL:
        raise ValidationError(
            f"Krylov weights do not sum to 1 (defect {defect:.3e}); "
            "the decomposition does not span the evolution of psi0 under H"
        )
    return SpreadProfile(times=times, phi=phi, p=p, krylov=K)


def _check_order(order, maximum=MAX_ORDER):
    order = int(order)
    if order < 1 or order > maximum:
        raise ValidationError(f"moment order must be in 1..{maximum}, got {order}")
    return order


def gsc(profile, order=1):
    """Moment curve C_order(t) = sum_n n^order p_n(t) over the whole grid."""
    order = _check_order(order)
    n = np.arange(profile.length, dtype=float)
    return profile.p @ n**order


def pdf(profile, t_index):
    """Chain-position distribution at one grid time."""
    idx = profile.index_of(t_index)
    return SpreadDistribution(t=float(profile.times[idx]), weights=profile.p[idx].copy())


def charfun(profile, t_index, u):
    """Characteristic function chi(u, t) = sum_n p_n(t) exp(-i u n)."""
    idx = profile.index_of(t_index)
    u = np.asarray(u, dtype=float)
    n = np.arange(profile.length)
    return np.exp(-1j * np.multiply.outer(u, n)) @ profile.p[idx]


def charfun_series(profile, t_index, u, order=CHARFUN_SERIES_ORDER):
    """Moment-series route to chi: sum_m (-iu)^m C_m / m! truncated at ``order``.

    Returns (values, remainder_bound).  The bound is the first omitted term
    |u|^(order+1) (L-1)^(order+1) / (order+1)! times the geometric factor
    1 / (1 - x/(order+2)) that majorizes the full tail for x = |u|(L-1) below
    order+2, and exp(x) times the first term otherwise.
    """
    idx = profile.index_of(t_index)
    order = int(order)
    if order < 1:
        raise ValidationError(f"series order must be >= 1, got {order}")
    u = np.asarray(u, dtype=float)
    n = np.arange(profile.length, dtype=float)
    p = profile.p[idx]
    vals = np.ones_like(u, dtype=complex)
    for m in range(1, order + 1):
        vals = vals + (-1j * u) ** m * float(p @ n**m) / factorial(m)
    x = np.abs(u) * max(profile.length - 1, 0)
    lead = x ** (order + 1) / factorial(order + 1)
    with np.errstate(over="ignore"):
        bound = np.where(
            x < order + 2.0,
            lead / np.maximum(1.0 - x / (order + 2.0), np.finfo(float).tiny),
            lead * np.exp(np.minimum(x, 700.0)),
        )
    return vals, bound


def generating(profile, t_index, eta):
    """Moment generating value G(eta, t) = sum_n exp(eta n) p_n(t).

    eta may be complex; eta = -iu continues G to the characteristic function.
    """
    idx = profile.index_of(t_index)
    n = np.arange(profile.length, dtype=float)
    eta = np.asarray(eta)
    eta = eta.astype(complex) if np.iscomplexobj(eta) else eta.astype(float)
    out = 1.0 + np.expm1(np.multiply.outer(eta, n)) @ profile.p[idx]
    if np.ndim(out) == 0:
        return complex(out) if np.iscomplexobj(eta) else float(out)
    return out


def generating_derivative(profile, t_index, order, step=None):
    """d^order G / d eta^order at eta = 0 by central differences.

    Uses the exp(eta n) - 1 form so the stencil cancellation happens on small
    quantities, and two Richardson stages on top of the O(h^2) stencil.  The
    default step grows with the order because the roundoff floor scales like
    eps / h^order.
    """
    idx = profile.index_of(t_index)
    order = _check_order(order)
    if step is None:
        step = _FD_DEFAULT_STEP[order]
    if not step > 0.0:
        raise ValidationError(f"step must be positive, got {step!r}")
    n = np.arange(profile.length, dtype=float)
    p = profile.p[idx]
    coefs = np.array([(-1.0) ** k * comb(order, k) for k in range(order + 1)])
    offsets = order / 2.0 - np.arange(order + 1)

    def stencil(h):
        # sum_k c_k (G(offset_k h) - 1); the -1 is exact since sum c_k = 0
        vals = np.expm1(np.outer(offsets * h, n)) @ p
        return float(coefs @ vals) / h**order

    d0, d1, d2 = stencil(step), stencil(step / 2.0), stencil(step / 4.0)
    r0 = (4.0 * d1 - d0) / 3.0
    r1 = (4.0 * d2 - d1) / 3.0
    return (16.0 * r1 - r0) / 15.0


def variance(profile, t_index):
    """Spread variance C_2 - C_1^2 at one grid time, clamped at tiny negatives."""
    idx = profile.index_of(t_index)
    n = np.arange(profile.length, dtype=float)
    p = profile.p[idx]
    val = float(p @ n**2) - float(p @ n) ** 2
    if -1e-12 < val < 0.0:
        return 0.0
    return val


def variance_curve(profile):
    """Spread variance over the whole grid."""
    n = np.arange(profile.length, dtype=float)
    c1 = profile.p @ n
    c2 = profile.p @ n**2
    out = c2 - c1**2
    return np.where((out > -1e-12) & (out < 0.0), 0.0, out)


def u_loschmidt(profile, t_index, u):
    """Echo in the conjugate variable: |chi(u, t)|^2."""
    return np.abs(charfun(profile, t_index, u)) ** 2


def spread_entropy(profile, t_index):
    """Shannon entropy of the chain distribution, with 0 log 0 = 0."""
    idx = profile.index_of(t_index)
    p = profile.p[idx]
    mask = p > 0.0
    return float(-(p[mask] @ np.log(p[mask])))


def entropy_curve(profile):
    p = profile.p
    safe = np.where(p > 0.0, p, 1.0)
    return -(p * np.log(safe)).sum(axis=1)


def gsc_energy_basis(H, psi0, K, order, times):
    """Moment curve assembled in the energy basis.

    C_order(t) = sum_ab A_ab rho_ab exp(i (E_a - E_b) t) with
    A = <E_a| sum_n n^order |K_n><K_n| |E_b> and rho the initial-state overlaps.
    Numerically this is w(t)^dag A w(t) with w(t) = exp(-iEt) * <E|psi0>.
    """
    H = as_operator(H)
    psi0 = as_state(psi0, dim=H.dim, name="psi0")
    order = _check_order(order)
    times = _check_time_grid(times)
    evals, evecs = H.spectral()
    K_op = spreading_operator(K, order)
    A = evecs.conj().T @ K_op.matrix @ evecs
    c = evecs.conj().T @ psi0
    w = np.exp(-1j * np.outer(times, evals)) * c  # (T, dim)
    vals = np.einsum("ta,ab,tb->t", w.conj(), A, w)
    return vals.real


def fubini_speed_check(K, H, psi0, t, du=1e-4):
    """Left and right sides of the small-u Fubini-Study speed relation.

    lhs = 1 - |<psi(0)|psi(du)>|^2 for psi(u) = exp(-iu K(t)) psi0 with the
    Heisenberg-evolved spreading operator K(t); rhs = variance(t) * du^2.
    Their ratio tends to 1 as du -> 0 whenever the variance is nonzero.
    """
    H = as_operator(H)
    psi0 = as_state(psi0, dim=H.dim, name="psi0")
    if not du > 0.0:
        raise ValidationError(f"du must be positive, got {du!r}")
    evals, evecs = H.spectral()
    K_op = spreading_operator(K, 1)
    U = evecs @ (np.exp(1j * evals * t)[:, None] * evecs.conj().T)  # exp(+iHt)
    K_t = HermitianOperator(U @ K_op.matrix @ U.conj().T)
    psi_u = evolve(K_t, psi0, du)
    lhs = 1.0 - abs(np.vdot(psi0, psi_u)) ** 2

    prof = spread_profile(K, H, psi0, np.array([t]))
    rhs = variance(prof, 0) * du**2
    return float(lhs), float(rhs)


def cost_in_basis(basis, psi_t, weights):
    """Cost sum_n weights_n |<psi_t|B_n>|^2 for an orthonormal ordered basis.

    basis rows are the B_n.  weights must be nonnegative and nondecreasing,
    matching the cost functions for which the Krylov basis is the minimizer.
    """
    basis = np.asarray(basis, dtype=complex)
    if basis.ndim != 2 or basis.shape[0] != basis.shape[1]:
        raise ValidationError("basis must be a square matrix of row vectors")
    gram = basis @ basis.conj().T
    if np.max(np.abs(gram - np.eye(basis.shape[0]))) > 1e-10:
        raise ValidationError("basis rows are not orthonormal")
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (basis.shape[0],):
        raise ValidationError("weights length must match the basis size")
    if np.any(weights < 0.0) or (len(weights) > 1 and np.any(np.diff(weights) < 0.0)):
        raise ValidationError("weights must be nonnegative and nondecreasing")
    psi_t = as_state(psi_t, dim=basis.shape[1], name="psi_t")
    amps = basis.conj() @ psi_t
    return float(weights @ np.abs(amps) ** 2)


def _nondegenerate_spectrum(H):
    evals, evecs = as_operator(H).spectral()
    scale = max(float(max(abs(evals[0]), abs(evals[-1]))), 1e-300)
    if len(evals) > 1 and np.min(np.diff(evals)) <= DEGENERACY_TOL * scale:
        raise ValidationError(
            "spectrum is degenerate within tolerance; long-time averages need "
            f"all gaps above {DEGENERACY_TOL} * ||H||"
        )
    return evals, evecs


def long_time_average(H, psi0, K, order=1):
    """Infinite-time average of C_order: the diagonal (energy basis) sum.

    Requires a nondegenerate spectrum so that all off-diagonal phases average
    to zero.
    """
    H = as_operator(H)
    psi0 = as_state(psi0, dim=H.dim, name="psi0")
    order = _check_order(order)
    evals, evecs = _nondegenerate_spectrum(H)
    A = evecs.conj().T @ spreading_operator(K, order).matrix @ evecs
    w = np.abs(evecs.conj().T @ psi0) ** 2
    return float((np.diag(A).real @ w).real)


def long_time_variance(H, psi0, K):
    """Infinite-time average of the spread variance.

    Mean of C_2 minus the squared mean of C_1 minus the surviving off-diagonal
    pair sum; nondegenerate and generic spectra leave exactly these three terms.
    """
    H = as_operator(H)
    psi0 = as_state(psi0, dim=H.dim, name="psi0")
    evals, evecs = _nondegenerate_spectrum(H)
    A1 = evecs.conj().T @ spreading_operator(K, 1).matrix @ evecs
    A2 = evecs.conj().T @ spreading_operator(K, 2).matrix @ evecs
    c = evecs.conj().T @ psi0
    w = np.abs(c) ** 2
    mean_c2 = float(np.diag(A2).real @ w)
    mean_c1 = float(np.diag(A1).real @ w)
    cross = (np.abs(A1) ** 2 * np.outer(w, w)).sum() - float((np.abs(np.diag(A1)) ** 2) @ w**2)
    return mean_c2 - mean_c1**2 - float(cross)
