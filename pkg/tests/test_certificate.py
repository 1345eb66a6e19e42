import math

import numpy as np
import pytest

import stabcert as sc
from stabcert import (
    DegenerateProblem,
    HalfPlaneViolation,
    ParameterOutOfRange,
    ZeroRangeOperator,
)

from helpers import haar_unitary, random_block_system, random_coercive


class TestDampingLowerBound:
    def test_reference_arithmetic(self):
        u, v = sc.damping_lower_bound(1.0, 1.0, 1.0, 0.2, 1.0)
        # (1.2)^2 / 2 = 0.72, so u = 1 - 0.2 * 1.72
        assert u == pytest.approx(0.656, abs=1e-12)
        assert v == pytest.approx(0.1, abs=1e-12)

    def test_small_shift_limit(self):
        u, v = sc.damping_lower_bound(1.0, 1.0, 1.0, 1e-12, 1.0)
        assert u == pytest.approx(1.0, abs=1e-11)
        assert v == pytest.approx(0.0, abs=1e-11)

    def test_p_one_reproduces_half_delta(self):
        for delta in (0.05, 0.2, 0.7):
            _, v = sc.damping_lower_bound(2.0, 1.5, 0.8, delta, 1.0)
            assert v == delta * 0.5

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"c": 0.0},
            {"c": -1.0},
            {"delta": 0.0},
            {"delta": -0.1},
            {"p": 0.0},
            {"p": 2.0},
            {"p": 2.5},
        ],
    )
    def test_parameter_validation(self, kwargs):
        args = {"c": 1.0, "gamma_norm": 1.0, "C_inv_norm": 1.0, "delta": 0.2, "p": 1.0}
        args.update(kwargs)
        with pytest.raises(ParameterOutOfRange):
            sc.damping_lower_bound(**args)


def _brute_force_shift(c, gamma_norm, C_inv_norm):
    """Independent exhaustive search at step 1e-3 in both axes."""
    deltas = np.arange(1e-3, 1.0, 1e-3) * c
    ps = np.arange(1e-3, 2.0, 1e-3)
    best = -math.inf
    for p in ps:
        t = (gamma_norm + deltas) * C_inv_norm
        u = c - deltas * (1.0 + t * t / (2.0 * p))
        v = deltas * (1.0 - 0.5 * p)
        d = 0.5 * np.minimum(u, v)
        m = float(d.max())
        if m > best:
            best = m
    return best


class TestOptimizeShift:
    def test_unit_constants(self):
        delta, p, c_tilde, d = sc.optimize_shift(1.0, 1.0, 1.0)
        assert 0 < d <= 0.5
        assert 0 < delta < 1.0
        assert 0 < p < 2.0
        assert c_tilde > 0
        oracle = _brute_force_shift(1.0, 1.0, 1.0)
        assert abs(d - oracle) <= 5e-3

    def test_margin_decreases_with_weaker_invertibility(self):
        previous = math.inf
        for k in (1.0, 2.0, 4.0, 8.0):
            _, _, _, d = sc.optimize_shift(1.0, 1.0, k)
            assert d <= previous + 1e-15
            previous = d

    def test_vanishing_inverse_norm_limit(self):
        # For C_inv_norm -> 0 the objective tends to (1/2) min(c - delta,
        # delta (1 - p/2)), whose supremum c/4 is approached at delta = c/2,
        # p -> 0; verified against the independent exhaustive search.
        c = 1.0
        delta, p, _, d = sc.optimize_shift(c, c, 1e-8)
        oracle = _brute_force_shift(c, c, 1e-8)
        assert abs(d - oracle) <= 1e-2
        assert abs(d - c / 4.0) <= 1e-2
        assert abs(delta - c / 2.0) <= 2e-2
        assert p < 0.05

    def test_margin_recomputes_bit_for_bit(self):
        delta, p, c_tilde, d = sc.optimize_shift(1.3, 0.7, 2.1)
        u, v = sc.damping_lower_bound(1.3, 0.7, 2.1, delta, p)
        assert d == 0.5 * min(u, v)
        assert c_tilde == u

    def test_degenerate_inputs(self):
        with pytest.raises(DegenerateProblem):
            sc.optimize_shift(0.0, 1.0, 1.0)
        with pytest.raises(DegenerateProblem):
            sc.optimize_shift(1.0, 1.0, 0.0)


class TestInvertibleCertificate:
    def test_inner_bound_formula(self):
        cert = sc.invertible_certificate(1.0, 1.0, 1.0)
        expected = (2.0 / cert.d) * ((1.0 + 1.0 + cert.delta_star) * 1.0 + 2.0)
        assert cert.M_inner == expected
        assert cert.M_inner >= 2.0 / cert.d

    def test_sound_against_scalar_spectrum(self):
        # Oracle: the generator [[-1, 1], [-1, 0]] has eigenvalues solving
        # x^2 + x + 1 = 0, with real part -1/2.
        roots = np.roots([1.0, 1.0, 1.0])
        abscissa = float(roots.real.max())
        assert abscissa == pytest.approx(-0.5, abs=1e-12)
        cert = sc.invertible_certificate(1.0, 1.0, 1.0)
        assert cert.d <= -abscissa

    def test_margin_monotone_in_damping(self):
        d1 = sc.invertible_certificate(1.0, 1.0, 1.0).d
        d2 = sc.invertible_certificate(2.0, 1.0, 1.0).d
        assert d2 >= d1


class TestKernelBlockBound:
    def test_values(self):
        assert sc.kernel_block_bound(2.0, 0.0) == pytest.approx(0.5)
        assert sc.kernel_block_bound(1.0, -0.25) == pytest.approx(4.0 / 3.0)

    def test_floor_must_stay_above_minus_c(self):
        with pytest.raises(HalfPlaneViolation):
            sc.kernel_block_bound(1.0, -1.0)

    def test_numeric_audit_against_dense_inverse(self):
        rng = np.random.default_rng(51)
        for _ in range(20):
            n = int(rng.integers(1, 6))
            gamma = random_coercive(rng, n, c=rng.uniform(0.2, 1.5))
            c = sc.hermitian_min_eig(gamma)
            floor = -0.5 * c
            bound = sc.kernel_block_bound(c, floor)
            lam = rng.uniform(-4, 4)
            measured = sc.operator_norm(
                np.linalg.inv((floor + 1j * lam) * np.eye(n) + gamma)
            )
            assert measured <= bound + 1e-10


class TestShiftedBlockCoercivity:
    def test_lower_bound_on_random_instances(self):
        rng = np.random.default_rng(53)
        for _ in range(30):
            n = int(rng.integers(1, 5))
            gamma = random_coercive(rng, n, c=rng.uniform(0.3, 1.2))
            U = haar_unitary(rng, n)
            C = U @ np.diag(rng.uniform(0.4, 2.0, n)) @ haar_unitary(rng, n)
            c = sc.hermitian_min_eig(gamma)
            g = sc.operator_norm(gamma)
            k = sc.operator_norm(np.linalg.inv(C))
            delta = rng.uniform(0.02, 0.9) * c
            p = rng.uniform(0.05, 1.95)
            u, v = sc.damping_lower_bound(c, g, k, delta, p)
            z = complex(rng.uniform(-0.4 * c, 1.5), rng.uniform(-3, 3))
            block = np.zeros((2 * n, 2 * n), dtype=complex)
            shifted = gamma - delta * np.eye(n)
            block[:n, :n] = shifted
            block[:n, n:] = delta * (shifted @ np.linalg.inv(C))
            block[n:, n:] = delta * np.eye(n)
            block += z * np.eye(2 * n)
            assert sc.hermitian_min_eig(block) >= z.real + min(u, v) - 1e-10


class TestFullCertificate:
    def test_two_by_one_pipeline(self):
        s = sc.validate_system(np.eye(2), np.eye(1), np.eye(2), [[1.0, 0.0]])
        cert = sc.full_certificate(s)
        assert cert.working_abscissa == pytest.approx(0.25)
        assert cert.c_eff == pytest.approx(0.75)
        assert cert.sigma_min_pos == pytest.approx(1.0, abs=1e-12)
        assert cert.rank == 1
        # Oracle: the restricted generator couples (u1, v) through
        # x^2 + x + 1 = 0 (real part -1/2) and decays at rate 1 on the kernel.
        ns = sc.normalize_system(s)
        fr = sc.decompose(ns.D)
        abscissa = sc.spectral_abscissa(sc.restricted_generator(ns.gamma_tilde, fr))
        assert abscissa == pytest.approx(-0.5, abs=1e-12)
        assert 0 < cert.delta_cert <= 0.5

    def test_scalar_full_system(self):
        s = sc.validate_system([[1.0]], [[1.0]], [[1.0]], [[1.0]])
        cert = sc.full_certificate(s)
        assert 0 < cert.delta_cert <= 0.5
        assert cert.transform_bound == 1.0
        assert cert.kernel_bound == 0.0
        B = sc.assemble_generator(np.array([[1.0 + 0j]]), np.array([[1.0 + 0j]]))
        measured_peak = sc.resolvent_norm(B, 0.0)
        assert measured_peak == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-12)
        assert cert.M_total >= measured_peak

    def test_weight_scaling_invariance(self):
        rng = np.random.default_rng(55)
        gamma = random_coercive(rng, 3, c=0.6)
        C = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        scaled = sc.validate_system(4.0 * np.eye(3), 9.0 * np.eye(2), gamma, C)
        cert_scaled = sc.full_certificate(scaled)
        ns = sc.normalize_system(scaled)
        plain = sc.validate_system(np.eye(3), np.eye(2), ns.gamma_tilde, ns.D)
        cert_plain = sc.full_certificate(plain)
        assert cert_scaled.delta_cert == pytest.approx(cert_plain.delta_cert, rel=1e-12)
        assert cert_scaled.inner.d == pytest.approx(cert_plain.inner.d, rel=1e-12)
        # kappa_norm covers the weights: 2 * (1/2) on alpha, 3 * (1/3) on beta
        assert cert_scaled.kappa_norm == pytest.approx(3.0 * 0.5, rel=1e-12)
        assert cert_plain.kappa_norm == pytest.approx(1.0, rel=1e-12)

    def test_component_consistency_invariants(self):
        rng = np.random.default_rng(57)
        for _ in range(10):
            n0 = int(rng.integers(1, 6))
            n1 = int(rng.integers(1, 6))
            r = int(rng.integers(1, min(n0, n1) + 1))
            s = random_block_system(rng, n0, n1, r)
            cert = sc.full_certificate(s)
            assert 0 < cert.delta_cert <= cert.working_abscissa
            assert cert.working_abscissa == pytest.approx(cert.c_gamma_tilde / 4.0)
            assert cert.delta_cert <= cert.inner.d
            assert cert.delta_cert <= cert.c_gamma_tilde
            assert math.isfinite(cert.M_total)
            u, v = sc.damping_lower_bound(
                cert.inner.c,
                cert.inner.gamma_norm,
                cert.inner.C_inv_norm,
                cert.inner.delta_star,
                cert.inner.p_star,
            )
            assert cert.inner.d == 0.5 * min(u, v)

    def test_zero_range_with_second_component_rejected(self):
        s = sc.validate_system(np.eye(2), np.eye(2), np.eye(2), np.zeros((2, 2)))
        with pytest.raises(ZeroRangeOperator):
            sc.full_certificate(s)

    def test_kernel_only_certificate_without_second_component(self):
        gamma = np.array([[2.0, 0.3], [0.1, 1.5]])
        s = sc.validate_system(np.eye(2), np.zeros((0, 0)), gamma, np.zeros((0, 2)))
        cert = sc.full_certificate(s)
        assert cert.inner is None
        assert cert.rank == 0
        assert cert.delta_cert == pytest.approx(cert.c_gamma_tilde / 4.0)
        assert cert.M_total == pytest.approx(cert.kernel_bound)
        abscissa = sc.spectral_abscissa(-gamma)
        assert abscissa <= -cert.delta_cert
