"""Moments, distributions, transforms, and averages of the chain position."""

import numpy as np
import pytest

from kspread import (
    Su2Params,
    ValidationError,
    charfun,
    charfun_series,
    cost_in_basis,
    entropy_curve,
    fubini_speed_check,
    generating,
    generating_derivative,
    gsc,
    gsc_energy_basis,
    lanczos,
    long_time_average,
    long_time_variance,
    operator_norm,
    pdf,
    spread_entropy,
    spread_profile,
    spreading_operator,
    su2_echo,
    su2_generating,
    su2_hamiltonian,
    su2_probabilities,
    su2_sc,
    su2_variance,
    u_loschmidt,
    variance,
    variance_curve,
)
from kspread.linalg import evolve
from kspread.statistics import SpreadProfile
from conftest import random_hermitian, random_state, random_unitary

HALF = Su2Params(alpha=1.0, gamma=1.0, j=0.5)


def make_profile(H, psi0, times):
    return lanczos(H, psi0), spread_profile(lanczos(H, psi0), H, psi0, np.asarray(times))


def su2_pipeline(params, times):
    H = su2_hamiltonian(params)
    psi0 = np.zeros(H.dim, dtype=complex)
    psi0[0] = 1.0
    K = lanczos(H, psi0)
    return K, H, psi0, spread_profile(K, H, psi0, np.asarray(times))


def random_pipeline(rng, dim, t_max=4.0, points=41):
    H = random_hermitian(rng, dim)
    psi0 = random_state(rng, dim)
    K = lanczos(H, psi0)
    times = np.linspace(0.0, t_max, points)
    return K, H, psi0, spread_profile(K, H, psi0, times)


class TestSpreadProfile:
    def test_initial_condition(self, rng):
        _, _, _, prof = random_pipeline(rng, 5, points=2)
        assert abs(prof.p[0, 0] - 1.0) < 1e-14
        assert np.max(prof.p[0, 1:]) < 1e-14

    def test_single_vector_chain_stays_put(self):
        H = np.diag([2.0, -1.0])
        psi0 = np.array([1.0, 0.0], dtype=complex)
        K = lanczos(H, psi0)
        prof = spread_profile(K, H, psi0, np.linspace(0.0, 5.0, 11))
        assert prof.length == 1
        assert np.max(np.abs(prof.p - 1.0)) < 1e-14

    def test_su2_weights_match_closed_form(self):
        params = Su2Params(alpha=1.0, gamma=1.0, j=1.0)
        times = np.linspace(0.0, 6.0, 31)
        _, _, _, prof = su2_pipeline(params, times)
        expected = np.array([su2_probabilities(params, t) for t in times])
        assert np.max(np.abs(prof.p - expected)) < 1e-9

    def test_weights_sum_to_one(self, rng):
        _, _, _, prof = random_pipeline(rng, 7)
        assert np.max(np.abs(prof.p.sum(axis=1) - 1.0)) < 1e-10

    def test_rejects_foreign_decomposition(self, rng):
        H = random_hermitian(rng, 4)
        K = lanczos(H, random_state(rng, 4))
        with pytest.raises(ValidationError):
            spread_profile(K, H, random_state(rng, 4), np.array([0.0]))

    def test_rejects_decreasing_grid(self, rng):
        H = random_hermitian(rng, 3)
        psi0 = random_state(rng, 3)
        with pytest.raises(ValidationError):
            spread_profile(lanczos(H, psi0), H, psi0, np.array([1.0, 0.5]))


class TestGsc:
    def test_zero_at_time_zero(self, rng):
        _, _, _, prof = random_pipeline(rng, 6)
        for m in range(1, 5):
            assert abs(gsc(prof, m)[0]) < 1e-12

    def test_su2_half_spin_value(self):
        # C(t) = (4 alpha^2 j * 2 / Delta^2) sin^2(Delta t / 2); at alpha=gamma=1,
        # j=1/2, t=pi/sqrt(5) the sine is maximal and C = 4/5.
        t_star = np.pi / np.sqrt(5.0)
        _, _, _, prof = su2_pipeline(HALF, [0.0, t_star])
        assert abs(gsc(prof, 1)[1] - 0.8) < 1e-12

    def test_matches_operator_expectation(self, rng):
        K, H, psi0, prof = random_pipeline(rng, 5)
        op = spreading_operator(K, 3).matrix
        for idx in (3, 17, 40):
            state = evolve(H, psi0, prof.times[idx])
            direct = float(np.vdot(state, op @ state).real)
            assert abs(gsc(prof, 3)[idx] - direct) < 1e-10

    def test_unitary_invariance(self, rng):
        dim = 5
        H = random_hermitian(rng, dim)
        psi0 = random_state(rng, dim)
        U = random_unitary(rng, dim)
        times = np.linspace(0.0, 4.0, 21)
        prof = spread_profile(lanczos(H, psi0), H, psi0, times)
        H2 = U.conj().T @ H @ U
        psi2 = U.conj().T @ psi0
        prof2 = spread_profile(lanczos(H2, psi2), H2, psi2, times)
        for m in range(1, 5):
            assert np.max(np.abs(gsc(prof, m) - gsc(prof2, m))) < 1e-9

    def test_order_cap(self, rng):
        _, _, _, prof = random_pipeline(rng, 4)
        with pytest.raises(ValidationError):
            gsc(prof, 7)
        with pytest.raises(ValidationError):
            gsc(prof, 0)


class TestPdf:
    def test_all_mass_at_origin_initially(self, rng):
        _, _, _, prof = random_pipeline(rng, 5)
        dist = pdf(prof, 0)
        assert abs(dist.weights[0] - 1.0) < 1e-14

    def test_su2_half_spin_masses(self):
        t = 0.9
        _, _, _, prof = su2_pipeline(HALF, [0.0, t])
        q = 0.8 * np.sin(np.sqrt(5.0) * t / 2.0) ** 2
        dist = pdf(prof, 1)
        assert np.allclose(dist.weights, [1.0 - q, q], atol=1e-12)

    def test_first_moment_consistency(self, rng):
        _, _, _, prof = random_pipeline(rng, 4, t_max=2.0, points=3)
        dist = pdf(prof, 2)
        n = np.arange(prof.length)
        assert abs(dist.weights @ n - gsc(prof, 1)[2]) < 1e-12

    def test_index_out_of_range(self, rng):
        _, _, _, prof = random_pipeline(rng, 4, points=5)
        with pytest.raises(ValidationError):
            pdf(prof, 5)


class TestCharfun:
    def test_normalization(self, rng):
        _, _, _, prof = random_pipeline(rng, 6)
        assert abs(charfun(prof, 10, 0.0) - 1.0) < 1e-14

    def test_periodicity(self, rng):
        _, _, _, prof = random_pipeline(rng, 6)
        assert abs(charfun(prof, 10, 2.0 * np.pi) - 1.0) < 1e-12

    def test_su2_half_spin_value(self):
        _, _, _, prof = su2_pipeline(HALF, [0.0, 1.0])
        expected = 1.0 - 2.0 * 0.8 * np.sin(np.sqrt(5.0) / 2.0) ** 2
        assert abs(charfun(prof, 1, np.pi) - expected) < 1e-12

    def test_inverse_dft_recovers_weights(self, rng):
        _, _, _, prof = random_pipeline(rng, 7)
        L = prof.length
        u = 2.0 * np.pi * np.arange(L) / L
        chi = charfun(prof, 23, u)
        n = np.arange(L)
        recovered = (np.exp(1j * np.outer(n, u)) @ chi).real / L
        assert np.max(np.abs(recovered - prof.p[23])) < 1e-10

    def test_series_agrees_within_bound(self, rng):
        _, _, _, prof = random_pipeline(rng, 5)
        u = np.linspace(-0.8, 0.8, 9)
        direct = charfun(prof, 30, u)
        series, bound = charfun_series(prof, 30, u)
        assert np.all(np.abs(series - direct) <= bound + 1e-15)
        small = np.abs(u) <= 0.25
        assert np.max(bound[small]) < 1e-9

    def test_series_bound_grows_safely(self, rng):
        # far outside the convergent regime the bound must still majorize
        _, _, _, prof = random_pipeline(rng, 8)
        u = np.array([4.0])
        direct = charfun(prof, 5, u)
        series, bound = charfun_series(prof, 5, u, order=4)
        assert np.abs(series - direct)[0] <= bound[0]


class TestGenerating:
    def test_eta_zero(self, rng):
        _, _, _, prof = random_pipeline(rng, 5)
        assert generating(prof, 12, 0.0) == pytest.approx(1.0, abs=1e-14)

    def test_su2_closed_form(self):
        params = Su2Params(alpha=1.2, gamma=0.7, j=1.5)
        times = np.linspace(0.0, 5.0, 11)
        _, _, _, prof = su2_pipeline(params, times)
        for idx, t in enumerate(times):
            for eta in (-1.0, -0.3, 0.4, 1.1):
                assert generating(prof, idx, eta) == pytest.approx(
                    su2_generating(params, eta, t), abs=1e-10
                )

    def test_matches_analytic_continuation(self, rng):
        _, _, _, prof = random_pipeline(rng, 6)
        for u in (0.3, 1.1, 2.9):
            gap = abs(generating(prof, 19, -1j * u) - charfun(prof, 19, u))
            assert gap < 1e-12

    def test_finite_difference_second_derivative(self, rng):
        _, _, _, prof = random_pipeline(rng, 4)
        idx = 25
        assert abs(generating_derivative(prof, idx, 2) - gsc(prof, 2)[idx]) < 1e-6

    def test_finite_difference_all_exposed_orders(self, rng):
        _, _, _, prof = random_pipeline(rng, 6)
        idx = 33
        # roundoff grows with the order; the acceptance tolerance applies to m <= 3
        caps = {1: 1e-9, 2: 1e-8, 3: 1e-6, 4: 1e-3, 5: 1e-2, 6: 1.0}
        for m, cap in caps.items():
            rel = abs(generating_derivative(prof, idx, m) - gsc(prof, m)[idx])
            rel /= max(1.0, abs(gsc(prof, m)[idx]))
            assert rel < cap, f"order {m}: {rel}"


class TestVarianceAndEntropy:
    def test_variance_zero_initially(self, rng):
        _, _, _, prof = random_pipeline(rng, 5)
        assert abs(variance(prof, 0)) < 1e-24

    def test_su2_variance_closed_form(self):
        params = Su2Params(alpha=0.9, gamma=1.3, j=2.0)
        times = np.linspace(0.0, 4.0, 9)
        _, _, _, prof = su2_pipeline(params, times)
        for idx, t in enumerate(times):
            assert variance(prof, idx) == pytest.approx(su2_variance(params, t), abs=1e-10)

    def test_variance_is_moment_difference(self, rng):
        _, _, _, prof = random_pipeline(rng, 6)
        curve = variance_curve(prof)
        direct = gsc(prof, 2) - gsc(prof, 1) ** 2
        assert np.max(np.abs(curve - np.where(np.abs(direct) < 1e-12, np.maximum(direct, 0.0), direct))) < 1e-12

    def test_entropy_zero_initially(self, rng):
        _, _, _, prof = random_pipeline(rng, 5)
        assert spread_entropy(prof, 0) < 1e-12

    def test_entropy_uniform_distribution(self):
        L = 6
        chain = np.diag(np.ones(L - 1), 1) + np.diag(np.ones(L - 1), -1)
        psi0 = np.zeros(L, dtype=complex)
        psi0[0] = 1.0
        K = lanczos(chain, psi0)
        uniform = SpreadProfile(
            times=np.array([0.0]),
            phi=np.full((1, L), np.sqrt(1.0 / L), dtype=complex),
            p=np.full((1, L), 1.0 / L),
            krylov=K,
        )
        assert spread_entropy(uniform, 0) == pytest.approx(np.log(L), abs=1e-14)

    def test_entropy_two_outcome_ln2(self):
        # q = 1/2 when sin^2(sqrt5 t/2) = 5/8
        t_star = 2.0 * np.arcsin(np.sqrt(5.0 / 8.0)) / np.sqrt(5.0)
        _, _, _, prof = su2_pipeline(HALF, [0.0, t_star])
        assert entropy_curve(prof)[1] == pytest.approx(np.log(2.0), abs=1e-12)


class TestEcho:
    def test_unit_at_zero(self, rng):
        _, _, _, prof = random_pipeline(rng, 5)
        assert u_loschmidt(prof, 14, 0.0) == pytest.approx(1.0, abs=1e-14)

    def test_su2_closed_form(self):
        params = Su2Params(alpha=1.0, gamma=1.0, j=10.0)
        _, _, _, prof = su2_pipeline(params, [0.0, 1.0])
        u = np.linspace(0.0, 2.0 * np.pi, 41)
        direct = u_loschmidt(prof, 1, u)
        closed = su2_echo(params, u, 1.0)
        assert np.max(np.abs(direct - closed)) < 1e-10

    def test_deep_decay_and_revival(self):
        params = Su2Params(alpha=1.0, gamma=1.0, j=10.0)
        u = np.linspace(0.05, 2.0 * np.pi - 0.05, 201)
        echo = su2_echo(params, u, 1.0)
        assert np.min(echo) < 1e-2
        assert su2_echo(params, 2.0 * np.pi, 1.0) == pytest.approx(1.0, abs=1e-12)


class TestEnergyBasisPath:
    def test_single_vector_chain(self):
        H = np.diag([1.0, 3.0])
        psi0 = np.array([0.0, 1.0], dtype=complex)
        K = lanczos(H, psi0)
        vals = gsc_energy_basis(H, psi0, K, 1, np.linspace(0.0, 3.0, 7))
        assert np.max(np.abs(vals)) < 1e-14

    def test_matches_krylov_path(self, rng):
        K, H, psi0, prof = random_pipeline(rng, 4)
        for m in (1, 2):
            cross = gsc_energy_basis(H, psi0, K, m, prof.times)
            assert np.max(np.abs(cross - gsc(prof, m))) < 1e-9

    def test_matches_su2_closed_form(self):
        params = Su2Params(alpha=1.0, gamma=1.0, j=1.0)
        times = np.linspace(0.0, 5.0, 21)
        K, H, psi0, _ = su2_pipeline(params, times)
        vals = gsc_energy_basis(H, psi0, K, 1, times)
        expected = np.array([su2_sc(params, t) for t in times])
        assert np.max(np.abs(vals - expected)) < 1e-9


class TestFubiniSpeed:
    def test_zero_time(self, rng):
        K, H, psi0, _ = random_pipeline(rng, 4)
        lhs, rhs = fubini_speed_check(K, H, psi0, 0.0)
        assert lhs < 1e-12 and rhs < 1e-30

    def test_su2_ratio_band(self):
        params = Su2Params(alpha=1.0, gamma=1.0, j=1.0)
        K, H, psi0, _ = su2_pipeline(params, [0.0, 1.0])
        lhs, rhs = fubini_speed_check(K, H, psi0, 0.7, du=1e-4)
        assert 0.99 < lhs / rhs < 1.01

    def test_random_ratio_band(self, rng):
        K, H, psi0, _ = random_pipeline(rng, 5)
        lhs, rhs = fubini_speed_check(K, H, psi0, 1.3, du=1e-4)
        assert 0.99 < lhs / rhs < 1.01


class TestCostInBasis:
    def test_krylov_basis_recovers_first_moment(self, rng):
        K, H, psi0, prof = random_pipeline(rng, 5, points=11)
        weights = np.arange(K.length, dtype=float)
        for idx in (0, 4, 10):
            state = evolve(H, psi0, prof.times[idx])
            cost = cost_in_basis(K.basis, state, weights)
            assert cost == pytest.approx(gsc(prof, 1)[idx], abs=1e-12)

    def test_zero_cost_at_start(self, rng):
        K, H, psi0, _ = random_pipeline(rng, 4)
        cost = cost_in_basis(K.basis, psi0, np.arange(K.length, dtype=float))
        assert cost < 1e-20

    def test_krylov_minimizes_at_small_time(self, rng):
        dim = 5
        H = random_hermitian(rng, dim)
        psi0 = random_state(rng, dim)
        K = lanczos(H, psi0)
        assert K.length == dim
        weights = np.arange(dim, dtype=float)
        t = 0.15
        state = evolve(H, psi0, t)
        krylov_cost = cost_in_basis(K.basis, state, weights)
        for _ in range(12):
            U = random_unitary(rng, dim - 1)
            rival = K.basis.copy()
            rival[1:] = U @ rival[1:]  # rotate everything except B_0 = psi0
            assert cost_in_basis(rival, state, weights) >= krylov_cost - 1e-12

    def test_rejects_decreasing_weights(self, rng):
        K, _, psi0, _ = random_pipeline(rng, 4)
        with pytest.raises(ValidationError):
            cost_in_basis(K.basis, psi0, np.array([0.0, 2.0, 1.0, 3.0]))

    def test_rejects_non_orthonormal_basis(self, rng):
        K, _, psi0, _ = random_pipeline(rng, 4)
        bad = K.basis.copy()
        bad[1] = bad[0]
        with pytest.raises(ValidationError):
            cost_in_basis(bad, psi0, np.arange(4, dtype=float))


class TestLongTimeAverages:
    def test_single_vector_chain(self):
        H = np.diag([1.0, 2.5])
        psi0 = np.array([1.0, 0.0], dtype=complex)
        K = lanczos(H, psi0)
        assert long_time_average(H, psi0, K, 1) == 0.0

    def test_matches_window_average(self, rng):
        H = random_hermitian(rng, 4)
        psi0 = random_state(rng, 4)
        K = lanczos(H, psi0)
        T = 1e4 / operator_norm(H)
        times = np.linspace(0.0, T, 20001)
        prof = spread_profile(K, H, psi0, times)
        for m in (1, 2):
            window = float(np.trapezoid(gsc(prof, m), times) / T)
            assert long_time_average(H, psi0, K, m) == pytest.approx(window, rel=0.01)
        window_var = float(np.trapezoid(variance_curve(prof), times) / T)
        assert long_time_variance(H, psi0, K) == pytest.approx(window_var, rel=0.01)

    def test_refuses_degenerate_spectrum(self):
        H = np.diag([1.0, 1.0, 2.0])
        psi0 = np.ones(3) / np.sqrt(3.0)
        K = lanczos(H, psi0)
        with pytest.raises(ValidationError):
            long_time_average(H, psi0, K, 1)
        with pytest.raises(ValidationError):
            long_time_variance(H, psi0, K)
