"""Finite-time change bounds for moments, entropy, and the modified cost."""

import numpy as np
import pytest

from kspread import (
    Su2Params,
    ValidationError,
    entropy_change_bound,
    f_function,
    gsc,
    gsc_change_bound,
    lanczos,
    modified_cost_bound,
    operator_norm,
    spread_profile,
    su2_hamiltonian,
    two_level_ratio,
    two_level_sc,
)
from conftest import random_hermitian, random_state, random_unitary


def pipeline(H, psi0, t_max=2.5, points=51):
    K = lanczos(H, psi0)
    times = np.linspace(0.0, t_max, points)
    return K, spread_profile(K, H, psi0, times)


def analytic_two_level_ratio(theta0, e0, e1, tau):
    """Ratio from the exact integrals: |Delta C| and 2 E0 int sqrt(C)."""
    de = e0 - e1
    delta = np.sin(theta0) ** 2 * np.sin(de * tau / 2.0) ** 2
    integral = np.sin(theta0) * (2.0 / de) * (1.0 - np.cos(de * tau / 2.0))
    bound = 2.0 * e0 * integral
    return delta / bound if bound else 0.0


class TestFFunction:
    def test_zero_initially(self, rng):
        _, prof = pipeline(random_hermitian(rng, 5), random_state(rng, 5))
        for m in (1, 2, 3):
            assert f_function(prof, 0, m) < 1e-7  # sqrt of roundoff-sized weights

    def test_two_level_equals_sqrt_sc(self):
        params = Su2Params(alpha=1.0, gamma=1.0, j=0.5)
        H = su2_hamiltonian(params)
        psi0 = np.array([1.0, 0.0], dtype=complex)
        _, prof = pipeline(H.matrix, psi0)
        for idx in (10, 25, 40):
            c = gsc(prof, 1)[idx]
            for m in (1, 2, 3):
                assert f_function(prof, idx, m) == pytest.approx(np.sqrt(c), abs=1e-12)

    def test_dominates_first_moment(self, rng):
        _, prof = pipeline(random_hermitian(rng, 4), random_state(rng, 4))
        for idx in range(0, 51, 5):
            assert f_function(prof, idx, 1) >= gsc(prof, 1)[idx] - 1e-12


class TestGscChangeBound:
    def test_zero_interval(self, rng):
        H = random_hermitian(rng, 4)
        _, prof = pipeline(H, random_state(rng, 4))
        report = gsc_change_bound(H, prof, 0.0, 1)
        assert report.delta_actual == 0.0
        assert report.bound == 0.0
        assert report.satisfied

    def test_randomized_suite(self, rng):
        for i in range(50):
            dim = 2 + i % 7
            H = random_hermitian(rng, dim)
            psi0 = random_state(rng, dim)
            _, prof = pipeline(H, psi0)
            tau = (0.5, 1.0, 2.0)[i % 3]
            report = gsc_change_bound(H, prof, tau, 1 + i % 3)
            assert report.satisfied, f"violation at system {i}"

    def test_monotone_in_tau(self, rng):
        H = random_hermitian(rng, 5)
        _, prof = pipeline(H, random_state(rng, 5))
        bounds = [gsc_change_bound(H, prof, tau, 1).bound for tau in (0.5, 1.0, 1.5, 2.0)]
        assert np.all(np.diff(bounds) >= 0.0)

    def test_unitary_invariance(self, rng):
        dim = 5
        H = random_hermitian(rng, dim)
        psi0 = random_state(rng, dim)
        U = random_unitary(rng, dim)
        H2 = U.conj().T @ H @ U
        psi2 = U.conj().T @ psi0
        _, prof = pipeline(H, psi0)
        _, prof2 = pipeline(H2, psi2)
        for tau in (0.8, 1.6):
            r1 = gsc_change_bound(H, prof, tau, 2)
            r2 = gsc_change_bound(H2, prof2, tau, 2)
            assert r1.bound == pytest.approx(r2.bound, abs=1e-9)
            assert r1.delta_actual == pytest.approx(r2.delta_actual, abs=1e-9)

    def test_rejects_tau_outside_grid(self, rng):
        H = random_hermitian(rng, 4)
        _, prof = pipeline(H, random_state(rng, 4), t_max=1.0)
        with pytest.raises(ValidationError):
            gsc_change_bound(H, prof, 2.0, 1)
        with pytest.raises(ValidationError):
            gsc_change_bound(H, prof, -0.5, 1)


class TestEntropyChangeBound:
    def test_two_level_case(self):
        params = Su2Params(alpha=1.0, gamma=1.0, j=0.5)
        H = su2_hamiltonian(params)
        psi0 = np.array([1.0, 0.0], dtype=complex)
        _, prof = pipeline(H.matrix, psi0)
        report = entropy_change_bound(H.matrix, prof, 1.0)
        assert report.satisfied
        assert 0.0 < report.ratio < 1.0

    def test_randomized_suite(self, rng):
        for i in range(50):
            dim = 2 + i % 7
            H = random_hermitian(rng, dim)
            _, prof = pipeline(H, random_state(rng, dim))
            report = entropy_change_bound(H, prof, (0.5, 1.0, 2.0)[i % 3])
            assert report.satisfied, f"violation at system {i}"


class TestModifiedCostBound:
    def test_two_level_bound_value(self, rng):
        H = random_hermitian(rng, 2)
        _, prof = pipeline(H, random_state(rng, 2))
        tau = 1.3
        report = modified_cost_bound(H, prof, tau)
        assert report.bound == pytest.approx(operator_norm(H) * tau, rel=1e-12)

    def test_zero_interval(self, rng):
        H = random_hermitian(rng, 3)
        _, prof = pipeline(H, random_state(rng, 3))
        report = modified_cost_bound(H, prof, 0.0)
        assert report.bound == 0.0 and report.satisfied

    def test_dim_six_bound_value(self, rng):
        H = random_hermitian(rng, 6)
        psi0 = random_state(rng, 6)
        K, prof = pipeline(H, psi0)
        if K.length != 6:
            pytest.skip("chain terminated early")
        report = modified_cost_bound(H, prof, 1.0)
        assert report.bound == pytest.approx(15.0 * operator_norm(H), rel=1e-12)
        assert report.satisfied

    def test_randomized_suite(self, rng):
        for i in range(50):
            dim = 2 + i % 7
            H = random_hermitian(rng, dim)
            _, prof = pipeline(H, random_state(rng, dim))
            report = modified_cost_bound(H, prof, (0.5, 1.0, 2.0)[i % 3])
            assert report.satisfied, f"violation at system {i}"


class TestRateInequality:
    def test_probability_rate_bounded(self, rng):
        # |dp_n/dt| <= 2 sqrt(p_n) ||H|| pointwise
        for _ in range(5):
            dim = int(rng.integers(2, 7))
            H = random_hermitian(rng, dim)
            psi0 = random_state(rng, dim)
            K = lanczos(H, psi0)
            times = np.linspace(0.0, 3.0, 601)
            prof = spread_profile(K, H, psi0, times)
            dt = times[1] - times[0]
            rate = (prof.p[2:] - prof.p[:-2]) / (2.0 * dt)
            mid = prof.p[1:-1]
            mask = mid > 1e-12
            lhs = np.abs(rate[mask])
            rhs = 2.0 * np.sqrt(mid[mask]) * operator_norm(H)
            assert np.all(lhs <= rhs + 1e-6)


class TestTwoLevelClosedForm:
    def test_no_spreading_at_theta_zero(self):
        assert two_level_ratio(0.0, 1.0, 0.0, 1.0) == 0.0

    def test_quarter_period_zero(self):
        # Delta E tau = 2 pi makes cos^2(Delta E tau / 4) vanish
        assert two_level_ratio(np.pi / 2.0, 1.0, 0.0, 2.0 * np.pi) == pytest.approx(0.0, abs=1e-15)

    def test_printed_value(self):
        assert two_level_ratio(np.pi / 2.0, 1.0, 0.0, np.pi) == pytest.approx(0.25, abs=1e-14)

    def test_matches_analytic_integrals(self):
        for theta0 in np.linspace(0.1, np.pi - 0.1, 7):
            for e0, e1 in ((1.0, 0.0), (2.0, 0.5), (1.5, 1.0)):
                t_rev = 2.0 * np.pi / (e0 - e1)
                for tau in np.linspace(0.05, 0.95, 7) * t_rev:
                    expected = analytic_two_level_ratio(theta0, e0, e1, tau)
                    assert two_level_ratio(theta0, e0, e1, tau) == pytest.approx(
                        expected, abs=1e-12
                    )

    def test_below_one_on_grid(self):
        thetas = np.linspace(0.0, np.pi, 21)
        for e0, e1 in ((1.0, 0.0), (3.0, 1.0)):
            taus = np.linspace(0.0, 2.0 * np.pi / (e0 - e1), 21)
            for theta0 in thetas:
                for tau in taus:
                    assert two_level_ratio(theta0, e0, e1, tau) < 1.0

    def test_pipeline_report_consistency(self):
        # the BoundReport ratio converges to the closed form as the integral refines
        theta0, e0, e1, tau = 1.1, 1.0, 0.0, 2.2
        H = np.diag([e0, e1]).astype(complex)
        psi0 = np.array([np.cos(theta0 / 2.0), np.sin(theta0 / 2.0)], dtype=complex)
        K = lanczos(H, psi0)
        prof = spread_profile(K, H, psi0, np.linspace(0.0, 3.0, 61))
        report = gsc_change_bound(H, prof, tau, 1)
        assert report.ratio == pytest.approx(two_level_ratio(theta0, e0, e1, tau), abs=1e-5)
        assert report.satisfied

    def test_two_level_sc_curve(self):
        theta0, e0, e1 = 0.8, 1.2, 0.3
        for t in (0.0, 0.7, 2.9):
            expected = np.sin(theta0) ** 2 * np.sin((e0 - e1) * t / 2.0) ** 2
            assert two_level_sc(theta0, e0, e1, t) == pytest.approx(expected, abs=1e-14)

    def test_rejects_bad_levels(self):
        with pytest.raises(ValidationError):
            two_level_ratio(1.0, 0.5, 1.0, 1.0)  # E0 < E1
        with pytest.raises(ValidationError):
            two_level_ratio(1.0, 1.0, -0.2, 1.0)  # negative E1
        with pytest.raises(ValidationError):
            two_level_ratio(4.0, 1.0, 0.0, 1.0)  # theta0 outside [0, pi]
        with pytest.raises(ValidationError):
            two_level_ratio(1.0, 1.0, 0.0, -1.0)  # negative tau


class TestBoundReportShape:
    def test_json_fields(self, rng):
        H = random_hermitian(rng, 4)
        _, prof = pipeline(H, random_state(rng, 4))
        payload = gsc_change_bound(H, prof, 1.0, 1).to_json_dict()
        assert set(payload) == {"tau", "delta_actual", "bound", "ratio", "satisfied"}

    def test_ratio_zero_for_zero_bound(self, rng):
        H = random_hermitian(rng, 3)
        _, prof = pipeline(H, random_state(rng, 3))
        report = gsc_change_bound(H, prof, 0.0, 1)
        assert report.ratio == 0.0
