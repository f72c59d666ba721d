"""Continuum-limit kernels and ensemble-averaged complexity curves.

In the continuum limit the Krylov chain index n becomes x = n/L and the
off-diagonal coefficient profile b(x) = sqrt(1 - x) turns the m-th moment into
a Fourier-type kernel

    J_m(omega) = 2 eps L^{m+1} g_m(l),   g_m(l) = int_0^1 Q_m(u) cos(l u) du,

with l = L omega, eps = 1/L and chain polynomial Q_m(u) = u^m (2-u)^m (1-u).
Averaging the double energy sum over the level ensemble splits into a contact
term, a disconnected product of semicircle densities, and a connected sine
kernel part evaluated in the box approximation (constant density L/pi).  After
normalizing by the same average of the total weight the resulting curve in
v = t/L is L-independent:

    <C_m>(v) = [1/(m+1) + c1 I1[g_m](v) - c2 I2[g_m](v)]
               / [1 + c1 I1[g_P](v) - c2 I2[g_P](v)],

    I1[g](v) = int_0^inf g(l) cos(l v) dl,
    I2[g](v) = int_0^inf g(l) sinc^2(l) cos(l v) dl,

with c1 = 32/(3 pi^2) from the semicircle overlap and c2 = 4/pi from the box
density, and g_P from the weight polynomial 1 - u.  The l integrals are done
by panel Gauss-Legendre quadrature up to a cutoff plus closed-form oscillatory
tails from the endpoint (integration by parts) expansion of g.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre, polynomial as P
from scipy.special import sici

from .linalg import NumericalError, ValidationError

# Semicircle-product and box-density weights of the averaged double sum.
_WEIGHT_DISCONNECTED = 32.0 / (3.0 * np.pi**2)
_WEIGHT_CONNECTED = 4.0 / np.pi
# Default l-cutoff of the quadrature segment; beyond it the tails are analytic.
DEFAULT_CUTOFF = 80.0


@dataclass(frozen=True)
class ContinuumModel:
    """Chain length L (sets eps = 1/L) and moment order m of the kernels."""

    L: int
    m: int

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2:
            raise ValidationError(f"L must be an integer >= 2, got {self.L!r}")
        if int(self.m) != self.m or not 1 <= self.m <= 4:
            raise ValidationError(f"m must be an integer in 1..4, got {self.m!r}")

    @property
    def eps(self):
        return 1.0 / float(self.L)


def chain_poly(m):
    """Ascending coefficients of Q_m(u) = u^m (2 - u)^m (1 - u)."""
    m = int(m)
    if m < 0:
        raise ValidationError(f"m must be nonnegative, got {m}")
    um = P.polypow([0.0, 1.0], m)
    tm = P.polypow([2.0, -1.0], m)
    return P.polymul(P.polymul(um, tm), [1.0, -1.0])


def _gl_panels(lo, hi, n_panels, n_nodes):
    x, w = legendre.leggauss(n_nodes)
    edges = np.linspace(lo, hi, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _g_of_l(qcoef, l):
    """g(l) = int_0^1 Q(u) cos(l u) du, vectorized over l.

    Panel count follows the largest oscillation frequency so each panel sees a
    bounded number of radians.
    """
    l = np.asarray(l, dtype=float)
    lmax = float(np.max(np.abs(l))) if l.size else 1.0
    n_panels = max(4, int(np.ceil(lmax / 12.0)))
    u, wu = _gl_panels(0.0, 1.0, n_panels, 16)
    qu = P.polyval(u, qcoef)
    return np.cos(np.multiply.outer(l, u)) @ (qu * wu)


def j_kernel(model, omega):
    """Moment kernel J_m(omega) = 2 eps L^{m+1} int_0^1 Q_m(u) cos(L omega u) du.

    Even in omega; J_m(0) = L^m / (m + 1).
    """
    omega = np.asarray(omega, dtype=float)
    l = model.L * omega
    vals = 2.0 * model.eps * float(model.L) ** (model.m + 1) * _g_of_l(chain_poly(model.m), l)
    return float(vals) if np.ndim(vals) == 0 else vals


def p_kernel(model, omega):
    """Weight kernel P(omega) = 2 eps L int_0^1 (1 - u) cos(L omega u) du.

    Even in omega; P(0) = eps L = 1.
    """
    omega = np.asarray(omega, dtype=float)
    l = model.L * omega
    vals = 2.0 * model.eps * model.L * _g_of_l(np.array([1.0, -1.0]), l)
    return float(vals) if np.ndim(vals) == 0 else vals


def sine_kernel(E, omega, rho):
    """Connected two-point factor 1 - sinc^2(pi rho omega) at density rho.

    Under the box approximation the density is the constant rho = rho_sc(0),
    so the factor depends on the level separation omega only; E is accepted
    for interface symmetry with the general (non-box) two-point function.
    """
    if not rho > 0.0:
        raise ValidationError(f"rho must be positive, got {rho!r}")
    omega = np.asarray(omega, dtype=float)
    vals = 1.0 - np.sinc(rho * omega) ** 2
    return float(vals) if np.ndim(vals) == 0 else vals


def _poly_endpoint_terms(qcoef):
    """Large-l expansion of g(l) as sum of c * trig(f l) / l^n terms.

    Repeated integration by parts of int_0^1 Q(u) cos(lu) du leaves only
    endpoint derivatives of Q; terms up to 1/l^5 are kept (Q''(1) = 0 for every
    chain polynomial here, and Q(0) = Q(1) = Q''(0) = 0 kill the rest).
    """
    dq = [np.asarray(qcoef, dtype=float)]
    for _ in range(4):
        dq.append(P.polyder(dq[-1]))
    ev = lambda k, x: float(P.polyval(x, dq[k]))
    terms = [
        (2, "cos", 1.0, ev(1, 1.0)),
        (2, "cos", 0.0, -ev(1, 0.0)),
        (3, "sin", 1.0, -ev(2, 1.0)),
        (4, "cos", 0.0, ev(3, 0.0)),
        (4, "cos", 1.0, -ev(3, 1.0)),
        (5, "sin", 1.0, ev(4, 1.0)),
    ]
    return [(n, kind, f, c) for n, kind, f, c in terms if c != 0.0]


def _osc_tails(n, freq, omega_cut):
    """(int cos(f l)/l^n dl, int sin(f l)/l^n dl) over [omega_cut, inf).

    Vectorized over freq, any sign; built by the upward recurrence from the
    n = 1 sine and cosine integrals.
    """
    if n < 2:
        raise ValidationError("tail recurrence needs n >= 2")
    freq = np.asarray(freq, dtype=float)
    af = np.abs(freq)
    safe = np.where(af == 0.0, 1.0, af)
    si, ci = sici(safe * omega_cut)
    c_val = -ci
    s_val = 0.5 * np.pi - si
    for k in range(2, n + 1):
        edge = 1.0 / ((k - 1) * omega_cut ** (k - 1))
        c_next = np.cos(safe * omega_cut) * edge - safe / (k - 1) * s_val
        s_next = np.sin(safe * omega_cut) * edge + safe / (k - 1) * c_val
        c_val, s_val = c_next, s_next
    c_val = np.where(af == 0.0, 1.0 / ((n - 1) * omega_cut ** (n - 1)), c_val)
    s_val = np.where(af == 0.0, 0.0, np.sign(freq) * s_val)
    return c_val, s_val


def _sinc2_expand(terms):
    """Multiply each term by sinc^2(l) = (1 - cos 2l)/(2 l^2), same term shape."""
    out = []
    for n, kind, f, c in terms:
        out.append((n + 2, kind, f, 0.5 * c))
        # trig(f l) cos(2 l) = [trig((f+2) l) + trig((f-2) l)] / 2 for both kinds
        out.append((n + 2, kind, f + 2.0, -0.25 * c))
        out.append((n + 2, kind, f - 2.0, -0.25 * c))
    return out


def _tail_integral(terms, v, omega_cut):
    """int_omega_cut^inf [sum of terms](l) cos(l v) dl for a v array."""
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    for n, kind, f, c in terms:
        for shifted in (f + v, f - v):
            cos_val, sin_val = _osc_tails(n, shifted, omega_cut)
            out += 0.5 * c * (cos_val if kind == "cos" else sin_val)
    return out


def _normalized_curve(m, v, omega_cut, panels_per_unit):
    qm = chain_poly(m)
    qp = np.array([1.0, -1.0])
    l, wl = _gl_panels(0.0, omega_cut, int(np.ceil(omega_cut * panels_per_unit)), 24)
    sinc2 = np.sinc(l / np.pi) ** 2
    gm = _g_of_l(qm, l)
    gp = _g_of_l(qp, l)
    coslv = np.cos(np.outer(v, l))

    terms_m, terms_p = _poly_endpoint_terms(qm), _poly_endpoint_terms(qp)
    i1m = coslv @ (wl * gm) + _tail_integral(terms_m, v, omega_cut)
    i2m = coslv @ (wl * gm * sinc2) + _tail_integral(_sinc2_expand(terms_m), v, omega_cut)
    i1p = coslv @ (wl * gp) + _tail_integral(terms_p, v, omega_cut)
    i2p = coslv @ (wl * gp * sinc2) + _tail_integral(_sinc2_expand(terms_p), v, omega_cut)

    num = 1.0 / (m + 1) + _WEIGHT_DISCONNECTED * i1m - _WEIGHT_CONNECTED * i2m
    den = 1.0 + _WEIGHT_DISCONNECTED * i1p - _WEIGHT_CONNECTED * i2p
    return num / den


def averaged_gsc_numeric(model, v, omega_cut=DEFAULT_CUTOFF, error_tol=1e-5):
    """Ensemble-averaged normalized GSC curve <C_m>(v) on a v grid.

    The curve is L-independent (the normalization absorbs every power of L);
    the model's m selects the chain polynomial.  Each value is computed twice,
    at the base and at 1.5x the quadrature resolution and cutoff, and the
    refined value is returned; disagreement beyond error_tol raises with the
    achieved error estimate.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValidationError("v must be a nonempty 1-d grid")
    if np.any(v < 0.0):
        raise ValidationError("v must be nonnegative")
    if not omega_cut > 0.0:
        raise ValidationError(f"omega_cut must be positive, got {omega_cut!r}")
    base = _normalized_curve(model.m, v, omega_cut, panels_per_unit=0.5)
    refined = _normalized_curve(model.m, v, 1.5 * omega_cut, panels_per_unit=0.75)
    estimate = float(np.max(np.abs(refined - base)))
    if estimate > error_tol:
        raise NumericalError(
            f"quadrature not converged: error estimate {estimate:.3e} "
            f"exceeds {error_tol:.3e}; raise omega_cut"
        )
    return refined


def c2_piecewise(v):
    """Exact four-branch ensemble-averaged normalized second moment <C_2>(v).

    Continuous across v = 1, 2, 3 and constant 1/3 from v = 3 on.
    """
    v = np.asarray(v, dtype=float)
    if np.any(v < 0.0):
        raise ValidationError("v must be nonnegative")
    pi = np.pi
    out = np.full(v.shape, 1.0 / 3.0)
    first = v < 1.0
    second = (v >= 1.0) & (v <= 2.0)
    third = (v > 2.0) & (v <= 3.0)

    x = v[first]
    out[first] = (
        19.0 * pi / 7.0
        + 640.0 * x**2
        - 1280.0 * x**3
        + (800.0 + 10.0 * pi) * x**4
        - (160.0 + 12.0 * pi) * x**5
        + 5.0 * pi * x**6
        - (5.0 * pi / 7.0) * x**7
    ) / (160.0 + 5.0 * pi - 160.0 * x + 15.0 * pi * x**2 - 5.0 * pi * x**3)
    x = v[second]
    out[second] = (-19.0 - 35.0 * x - 70.0 * x**4 + 84.0 * x**5 - 35.0 * x**6 + 5.0 * x**7) / (
        35.0 * (-1.0 - 3.0 * x - 3.0 * x**2 + x**3)
    )
    x = v[third]
    out[third] = (
        -6637.0 / 7.0
        + 2565.0 * x
        - 2880.0 * x**2
        + 1760.0 * x**3
        - 630.0 * x**4
        + 132.0 * x**5
        - 15.0 * x**6
        + (5.0 / 7.0) * x**7
    ) / (-75.0 + 135.0 * x - 45.0 * x**2 + 5.0 * x**3)
    return float(out) if np.ndim(v) == 0 else out
