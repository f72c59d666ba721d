"""Closed forms for spreading statistics of su(2) and su(1,1) Hamiltonians.

For H = alpha (J+ + J-) + gamma J0 + delta 1 acting on a spin-j multiplet the
Krylov chain is the weight ladder |j, -j+n>, the Lanczos coefficients are known
in closed form, and the chain distribution is binomial.  For
H = 2 lambda (e^{i beta} K+ + e^{-i beta} K-) + 2 omega K0 on a positive
discrete-series representation with lowest weight h (and 2 lambda > omega) the
distribution is negative binomial; a Perelomov displacement maps the problem
("case I") onto the pure ladder Hamiltonian ("case II") whose coefficients and
wavefunctions are simplest.  Numerical realizations on (truncated) matrices are
provided so every closed form can be checked against the generic machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import gammaln

from .linalg import HermitianOperator, ValidationError


def _check_half_integer(j):
    two_j = 2.0 * j
    if abs(two_j - round(two_j)) > 1e-9 or j <= 0.0:
        raise ValidationError(f"j must be a positive half-integer, got {j!r}")
    return int(round(two_j))


@dataclass(frozen=True)
class Su2Params:
    """Couplings of alpha (J+ + J-) + gamma J0 + delta 1 on spin j."""

    alpha: float
    gamma: float
    j: float
    delta: float = 0.0

    def __post_init__(self):
        _check_half_integer(self.j)
        if self.alpha < 0.0 or self.gamma < 0.0 or self.delta < 0.0:
            raise ValidationError("alpha, gamma, delta must be nonnegative")
        if self.alpha == 0.0 and self.gamma == 0.0:
            raise ValidationError("alpha and gamma cannot both vanish (Delta must be positive)")

    @property
    def two_j(self):
        return _check_half_integer(self.j)

    @property
    def frequency(self):
        """Rabi frequency Delta = sqrt(4 alpha^2 + gamma^2)."""
        return float(np.hypot(2.0 * self.alpha, self.gamma))


def su2_matrices(j):
    """J0, J+, J- on the spin-j multiplet ordered as |j, -j+n>, n = 0..2j."""
    two_j = _check_half_integer(j)
    dim = two_j + 1
    n = np.arange(dim, dtype=float)
    J0 = np.diag(n - j).astype(complex)
    ladder = np.sqrt((n[:-1] + 1.0) * (two_j - n[:-1]))
    Jp = np.zeros((dim, dim), dtype=complex)
    Jp[np.arange(1, dim), np.arange(dim - 1)] = ladder
    return J0, Jp, Jp.conj().T


def su2_hamiltonian(params):
    """Matrix realization; the Krylov chain of (H, e_0) is the standard basis."""
    J0, Jp, Jm = su2_matrices(params.j)
    dim = J0.shape[0]
    H = params.alpha * (Jp + Jm) + params.gamma * J0 + params.delta * np.eye(dim)
    return HermitianOperator(H)


def su2_lanczos(params):
    """Closed-form Lanczos coefficients a_n = gamma (n - j) + delta, b_n = alpha sqrt(n (2j - n + 1))."""
    two_j = params.two_j
    n_a = np.arange(two_j + 1, dtype=float)
    n_b = np.arange(1, two_j + 1, dtype=float)
    a = params.gamma * (n_a - params.j) + params.delta
    b = params.alpha * np.sqrt(n_b * (two_j - n_b + 1.0))
    return a, b


def su2_occupation(params, t):
    """Binomial success weight q(t) = (4 alpha^2 / Delta^2) sin^2(Delta t / 2)."""
    d = params.frequency
    t = np.asarray(t, dtype=float)
    return (2.0 * params.alpha / d) ** 2 * np.sin(0.5 * d * t) ** 2


def su2_amplitude(params, n, t):
    """Amplitude phi_n(t) on the weight ladder.

    Stable product form of the coherent-state result: with
    z = cos(Delta t/2) + i (gamma/Delta) sin(Delta t/2),

        phi_n = sqrt(C(2j, n)) e^{-i delta t} (-2 i alpha sin(Delta t/2)/Delta)^n z^{2j - n}.
    """
    two_j = params.two_j
    n = int(n)
    if n < 0 or n > two_j:
        raise ValidationError(f"n must lie in 0..{two_j}, got {n}")
    d = params.frequency
    t = np.asarray(t, dtype=float)
    s = np.sin(0.5 * d * t)
    z = np.cos(0.5 * d * t) + 1j * (params.gamma / d) * s
    binom = np.exp(
        0.5 * (gammaln(two_j + 1.0) - gammaln(n + 1.0) - gammaln(two_j - n + 1.0))
    )
    amp = binom * np.exp(-1j * params.delta * t)
    amp = amp * (-2j * params.alpha * s / d) ** n * z ** (two_j - n)
    return amp


def su2_probabilities(params, t):
    """All chain weights p_n(t), the binomial distribution with weight q(t)."""
    two_j = params.two_j
    q = float(su2_occupation(params, t))
    n = np.arange(two_j + 1)
    return stats.binom.pmf(n, two_j, q)


def su2_sc(params, t):
    """Spread complexity C(t) = (8 alpha^2 j / Delta^2) sin^2(Delta t / 2)."""
    return 2.0 * params.j * su2_occupation(params, t)


def su2_c2(params, t):
    """Second moment C_2 = C + (1 - 1/(2j)) C^2."""
    c = su2_sc(params, t)
    return c + (1.0 - 1.0 / (2.0 * params.j)) * c**2


def su2_variance(params, t):
    """Spread variance C - C^2 / (2j); vanishes exactly where C does (gamma > 0)."""
    c = su2_sc(params, t)
    return c - c**2 / (2.0 * params.j)


def su2_generating(params, eta, t):
    """Generating value G(eta, t) = (1 + (e^eta - 1) C/(2j))^{2j} (binomial pgf)."""
    c = su2_sc(params, t)
    return (1.0 + np.expm1(eta) * c / (2.0 * params.j)) ** params.two_j


def su2_echo(params, u, t):
    """Echo |chi(u, t)|^2 = (1 + (2/j) sin^2(u/2) C (C/(2j) - 1))^{2j}.

    Equivalent to (1 - 4 q (1 - q) sin^2(u/2))^{2j} for the binomial weight
    q = C/(2j), which is |G(-iu, t)|^2 evaluated directly.
    """
    c = su2_sc(params, t)
    base = 1.0 + (2.0 * np.sin(0.5 * np.asarray(u, dtype=float)) ** 2 / params.j) * c * (
        c / (2.0 * params.j) - 1.0
    )
    return base**params.two_j


def su2_pdf_halfspin(params, t):
    """The two weights (p_0, p_1) for j = 1/2."""
    if params.two_j != 1:
        raise ValidationError(f"closed-form two-level pdf needs j = 1/2, got j = {params.j}")
    q = su2_occupation(params, t)
    return 1.0 - q, q


@dataclass(frozen=True)
class Su11Params:
    """Couplings of 2 lambda (e^{i beta} K+ + e^{-i beta} K-) + 2 omega K0, lowest weight h."""

    lam: float
    omega: float
    h: float
    beta: float = 0.0

    def __post_init__(self):
        if self.lam <= 0.0:
            raise ValidationError(f"lam must be positive, got {self.lam!r}")
        if self.omega < 0.0:
            raise ValidationError(f"omega must be nonnegative, got {self.omega!r}")
        if self.h <= 0.0:
            raise ValidationError(f"h must be positive, got {self.h!r}")
        if not 2.0 * self.lam > self.omega:
            raise ValidationError(
                f"need 2 lam > omega for hyperbolic spreading, got lam={self.lam!r}, omega={self.omega!r}"
            )

    @property
    def frequency(self):
        """Growth rate Delta = sqrt(4 lambda^2 - omega^2)."""
        return float(np.sqrt(4.0 * self.lam**2 - self.omega**2))


def _check_case(case):
    case = str(case).upper()
    if case not in ("I", "II"):
        raise ValidationError(f"case must be 'I' or 'II', got {case!r}")
    return case


def su11_transformed_coeffs(params, theta, phi):
    """Ladder coefficients (A0, A+) after the displacement D(theta, phi).

    A0 multiplies K0 and A+ multiplies K+ in the rotated Hamiltonian; A0 comes
    out real for every (theta, phi).  At phi = beta, theta = atanh(omega/2 lambda)
    the K0 part cancels and A+ = Delta e^{-i beta}.
    """
    lam, om, beta = params.lam, params.omega, params.beta
    z = -np.tanh(0.5 * theta) * np.exp(-1j * phi)
    denom = 1.0 - abs(z) ** 2
    a0 = 2.0 * om * np.cosh(theta) + (4.0 * lam / denom) * (
        z * np.exp(1j * beta) + np.conj(z) * np.exp(-1j * beta)
    )
    ap = -om * np.exp(-1j * phi) * np.sinh(theta) + (2.0 * lam / denom) * (
        z**2 * np.exp(1j * beta) + np.exp(-1j * beta)
    )
    return complex(a0), complex(ap)


def su11_lanczos(params, case, n_max):
    """First n_max+1 diagonal and n_max off-diagonal closed-form coefficients.

    Case I (original frame): a_n = 2 omega (h + n), b_n = 2 lambda sqrt(n (2h + n - 1)).
    Case II (displaced frame): a_n = 0, b_n = Delta sqrt(n (2h + n - 1)).
    """
    case = _check_case(case)
    n_max = int(n_max)
    if n_max < 0:
        raise ValidationError(f"n_max must be nonnegative, got {n_max}")
    n_a = np.arange(n_max + 1, dtype=float)
    n_b = np.arange(1, n_max + 1, dtype=float)
    ladder = np.sqrt(n_b * (2.0 * params.h + n_b - 1.0))
    if case == "I":
        return 2.0 * params.omega * (params.h + n_a), 2.0 * params.lam * ladder
    return np.zeros(n_max + 1), params.frequency * ladder


def su11_sc(params, case, t):
    """Spread complexity: 2h sinh^2(Delta t) in case II, (4 lam^2/Delta^2) times that in case I."""
    case = _check_case(case)
    d = params.frequency
    base = 2.0 * params.h * np.sinh(d * np.asarray(t, dtype=float)) ** 2
    if case == "II":
        return base
    return (2.0 * params.lam / d) ** 2 * base


def su11_c2(params, case, t):
    """Second moment C_2 = C + (1 + 1/(2h)) C^2."""
    c = su11_sc(params, case, t)
    return c + (1.0 + 1.0 / (2.0 * params.h)) * c**2


def su11_variance(params, case, t):
    """Spread variance C + C^2/(2h)."""
    c = su11_sc(params, case, t)
    return c + c**2 / (2.0 * params.h)


def su11_generating(params, case, eta, t):
    """Generating value G(eta, t) = (1 - (e^eta - 1) C/(2h))^{-2h}.

    The discrete-series sum converges only while the base stays positive, i.e.
    eta < log(1 + 2h/C); beyond that a domain error is raised.
    """
    c = float(su11_sc(params, case, t))
    base = 1.0 - np.expm1(eta) * c / (2.0 * params.h)
    if np.any(base <= 0.0):
        limit = np.log1p(2.0 * params.h / c) if c > 0.0 else np.inf
        raise ValidationError(
            f"eta = {eta!r} lies beyond the convergence bound eta < {limit!r} "
            "of the discrete-series sum"
        )
    return base ** (-2.0 * params.h)


def su11_amplitude(params, n, t):
    """Case-II amplitude phi_n(t) = (-i)^n N_n sech^{2h}(Delta t) tanh^n(Delta t).

    N_n = sqrt(Gamma(2h + n) / (n! Gamma(2h))).  The phase convention is the
    beta = 0 one, which matches the positive-b Lanczos gauge of the real
    tridiagonal case-II matrix.
    """
    n = int(n)
    if n < 0:
        raise ValidationError(f"n must be nonnegative, got {n}")
    h = params.h
    d = params.frequency
    t = np.asarray(t, dtype=float)
    log_norm = 0.5 * (gammaln(2.0 * h + n) - gammaln(n + 1.0) - gammaln(2.0 * h))
    th = np.tanh(d * t)
    # sech^{2h} via logs to survive large Delta t
    log_mag = log_norm - 2.0 * h * np.log(np.cosh(d * t))
    if n == 0:
        return np.exp(log_mag) + 0.0j
    with np.errstate(divide="ignore"):
        log_tanh = np.where(th != 0.0, np.log(np.abs(th)), -np.inf)
    mag = np.exp(log_mag + n * log_tanh)
    return (-1j) ** n * mag * np.sign(th) ** n


def su11_probabilities(params, case, t, n_max):
    """Chain weights p_0..p_{n_max}, the negative binomial with mean C(t)."""
    case = _check_case(case)
    c = float(su11_sc(params, case, t))
    w = c / (c + 2.0 * params.h)
    n = np.arange(int(n_max) + 1)
    return stats.nbinom.pmf(n, 2.0 * params.h, 1.0 - w)


def su11_matrices(h, cutoff):
    """K0, K+, K- on the lowest-weight-h discrete series truncated at ``cutoff`` states."""
    cutoff = int(cutoff)
    if cutoff < 2:
        raise ValidationError(f"cutoff must be at least 2, got {cutoff}")
    if h <= 0.0:
        raise ValidationError(f"h must be positive, got {h!r}")
    n = np.arange(cutoff, dtype=float)
    K0 = np.diag(h + n).astype(complex)
    ladder = np.sqrt((n[:-1] + 1.0) * (2.0 * h + n[:-1]))
    Kp = np.zeros((cutoff, cutoff), dtype=complex)
    Kp[np.arange(1, cutoff), np.arange(cutoff - 1)] = ladder
    return K0, Kp, Kp.conj().T


def su11_hamiltonian(params, case, cutoff):
    """Truncated matrix realization; psi0 = e_0 is the lowest-weight state.

    Case I is the original Hamiltonian (its Krylov data from |h, 0> carries the
    case-I coefficients); case II is the displaced pure-ladder one.
    """
    case = _check_case(case)
    K0, Kp, Km = su11_matrices(params.h, cutoff)
    if case == "I":
        H = (
            2.0 * params.lam * (np.exp(1j * params.beta) * Kp + np.exp(-1j * params.beta) * Km)
            + 2.0 * params.omega * K0
        )
    else:
        d = params.frequency
        H = d * (np.exp(-1j * params.beta) * Kp + np.exp(1j * params.beta) * Km)
    return HermitianOperator(H)


def su11_cutoff(params, case, t_max, tail_tol=1e-10, start=128, limit=1 << 12):
    """Truncation size with closed-form tail mass below ``tail_tol`` at t_max.

    Doubles the cutoff until the negative binomial leaves less than tail_tol
    beyond 80% of the kept states.  Raises if ``limit`` is hit first; the
    default limit keeps the dense realization well under a gigabyte, and the
    sinh^2 growth of the occupation means only modest t_max fit any cutoff.
    """
    case = _check_case(case)
    if not tail_tol > 0.0:
        raise ValidationError(f"tail_tol must be positive, got {tail_tol!r}")
    c = float(su11_sc(params, case, t_max))
    w = c / (c + 2.0 * params.h)
    cutoff = int(start)
    while cutoff <= limit:
        tail = stats.nbinom.sf(int(0.8 * cutoff), 2.0 * params.h, 1.0 - w)
        if tail < tail_tol:
            return cutoff
        cutoff *= 2
    raise ValidationError(
        f"no cutoff below {limit} reaches tail mass {tail_tol!r} at t_max = {t_max!r}; "
        "reduce the time range (occupation grows like sinh^2(Delta t))"
    )


def truncation_tail_mass(p_rows):
    """Largest observed weight beyond 80% of the kept chain; p_rows is (T, N)."""
    p = np.atleast_2d(np.asarray(p_rows, dtype=float))
    n0 = int(0.8 * p.shape[1])
    return float(p[:, n0:].sum(axis=1).max())
