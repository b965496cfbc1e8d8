import mpmath
import numpy as np
import pytest
from scipy.special import mathieu_a, mathieu_b

from arcbem.errors import ArcbemError
from arcbem.specfun import (
    ChebyshevSeries,
    chebyshev_T,
    chebyshev_U,
    green_kernel,
    mathieu_char,
    pade_coefficients,
    pade_error_bound,
    pade_sqrt_scalar,
    rotated_sqrt,
    smooth_remainder,
)


class TestChebyshev:
    def test_known_values(self):
        assert chebyshev_T(2, 0.5) == pytest.approx(-0.5, abs=1e-15)
        assert chebyshev_U(1, 0.3) == pytest.approx(0.6, abs=1e-15)
        for n in range(0, 30, 3):
            assert chebyshev_T(n, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_bounded_on_interval(self):
        x = np.linspace(-1, 1, 501)
        for n in (0, 1, 5, 17):
            assert np.max(np.abs(chebyshev_T(n, x))) <= 1.0 + 1e-12

    def test_trig_definition(self):
        x = np.linspace(-0.999, 0.999, 101)
        th = np.arccos(x)
        for n in (3, 8, 21):
            assert np.allclose(chebyshev_T(n, x), np.cos(n * th), atol=1e-10)
            assert np.allclose(chebyshev_U(n, x), np.sin((n + 1) * th) / np.sin(th),
                               atol=1e-9)

    def test_clenshaw_matches_direct(self):
        rng = np.random.default_rng(7)
        x = np.linspace(-1, 1, 64)
        for kind in ("first", "second"):
            for m in (1, 5, 33, 64):
                c = rng.standard_normal(m) + 1j * rng.standard_normal(m)
                ser = ChebyshevSeries(kind, c)
                assert np.allclose(ser(x), ser.eval_direct(x), atol=1e-12, rtol=1e-12)

    def test_orthogonality_first_kind(self):
        # (1/pi) int T_m T_n / sqrt(1-x^2) via 256-point Gauss-Chebyshev
        m = 256
        x = np.cos((2 * np.arange(1, m + 1) - 1) * np.pi / (2 * m))
        w = np.pi / m
        for a in range(21):
            for b in range(a, 21):
                val = np.sum(chebyshev_T(a, x) * chebyshev_T(b, x)) * w / np.pi
                want = (1.0 if a == 0 else 0.5) if a == b else 0.0
                assert val == pytest.approx(want, abs=1e-12)

    def test_orthogonality_second_kind(self):
        m = 256
        th = (2 * np.arange(1, m + 1) - 1) * np.pi / (2 * m)
        x = np.cos(th)
        w = (np.pi / m) * np.sin(th) ** 2   # sqrt(1-x^2) dx absorbed
        for a in range(21):
            for b in range(a, 21):
                val = np.sum(chebyshev_U(a, x) * chebyshev_U(b, x) * w)
                want = np.pi / 2 if a == b else 0.0
                assert val == pytest.approx(want, abs=1e-12)


class TestGreenKernel:
    def test_laplace_values(self):
        assert green_kernel(0.0, 1.0) == pytest.approx(0.0, abs=1e-15)
        assert green_kernel(0.0, np.exp(-2 * np.pi)) == pytest.approx(1.0, rel=1e-14)

    def test_helmholtz_value_against_series_oracle(self):
        # independent high-precision oracle for J0(1), Y0(1)
        mpmath.mp.dps = 30
        j = complex(mpmath.besselj(0, 1))
        y = complex(mpmath.bessely(0, 1))
        want = 0.25j * (j + 1j * y)
        got = green_kernel(1.0, 1.0)
        assert got == pytest.approx(want, abs=1e-13)
        assert got.real == pytest.approx(-0.0220642, abs=1e-6)
        assert got.imag == pytest.approx(0.1912994, abs=1e-6)

    def test_oracle_grid(self):
        mpmath.mp.dps = 30
        for k in (0.5, 3.0, 40.0):
            for r in (1e-6, 0.02, 1.0, 7.9, 8.1, 55.0):
                want = complex(0.25j * mpmath.hankel1(0, k * r))
                assert green_kernel(k, r) == pytest.approx(want, rel=1e-11, abs=1e-13)

    def test_singular_rejected(self):
        with pytest.raises(ArcbemError):
            green_kernel(1.0, 0.0)

    def test_smooth_remainder_limit(self):
        lim = 0.25j - (np.euler_gamma + np.log(0.5)) / (2 * np.pi)
        assert smooth_remainder(1.0, 0.0) == pytest.approx(lim, abs=1e-15)
        assert smooth_remainder(1.0, 1e-8) == pytest.approx(lim, abs=1e-12)

    def test_smooth_remainder_continuity(self):
        a = smooth_remainder(1.0, 1e-6)
        b = smooth_remainder(1.0, 2e-6)
        assert abs(a - b) < 1e-5

    def test_smooth_remainder_consistent_with_kernel(self):
        for k in (0.7, 12.0):
            for r in (1e-3, 0.3, 2.0):
                want = green_kernel(k, r) + np.log(r) / (2 * np.pi)
                assert smooth_remainder(k, r) == pytest.approx(want, abs=1e-14)


class TestPade:
    def test_closed_forms_np1(self):
        c = pade_coefficients(1, 0.0)
        assert c.a[0] == pytest.approx(0.5, abs=1e-15)
        assert c.b[0] == pytest.approx(0.25, abs=1e-15)
        assert c.c0 == 1.0

    def test_theta_zero_is_base(self):
        c = pade_coefficients(8, 0.0)
        assert abs(c.C0 - c.c0) < 1e-14
        assert np.max(np.abs(c.A - c.a)) < 1e-14
        assert np.max(np.abs(c.B - c.b)) < 1e-14

    def test_rotated_set_equals_rotated_rational(self):
        # C0 + sum A z/(1+Bz) must equal e^{i t/2} R(e^{-i t}(1+z) - 1)
        th = np.pi / 3
        c = pade_coefficients(9, th)
        base = pade_coefficients(9, 0.0)
        rng = np.random.default_rng(3)
        z = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        w = np.exp(-1j * th) * (1 + z) - 1
        want = np.exp(0.5j * th) * pade_sqrt_scalar(w, base)
        got = pade_sqrt_scalar(z, c)
        assert np.allclose(got, want, atol=1e-12)

    @pytest.mark.parametrize("theta", [np.pi / 6, np.pi / 3, np.pi / 2])
    @pytest.mark.parametrize("n_terms", [5, 15, 50])
    def test_lemma_bound_on_grid(self, theta, n_terms):
        # On the ray arg(1+z) = theta (where the rotated cut is centred away
        # from z) the bound holds with slack; allow only a roundoff floor.
        coeffs = pade_coefficients(n_terms, theta)
        for r in (0.25, 1.0, 4.0, 16.0, 100.0):
            z = r * np.exp(1j * theta) - 1.0
            err = abs(pade_sqrt_scalar(z, coeffs) - rotated_sqrt(z, theta))
            bound = pade_error_bound(r, theta, n_terms)
            assert err <= bound + 1e-13 * (1.0 + np.sqrt(r))

    @pytest.mark.parametrize("theta", [np.pi / 6, np.pi / 3, np.pi / 2])
    @pytest.mark.parametrize("n_terms", [5, 15])
    def test_error_formula_both_real_rays(self, theta, n_terms):
        # Exact error: 2 sqrt(w) g^(2Np+1) / (1 + g^(2Np+1)) with
        # g = (sqrt(w)-1)/(sqrt(w)+1), w = e^{-i theta}(1+z).  The tabulated
        # bound drops the denominator, so allow that factor explicitly; on the
        # negative real axis the effective gamma angle is (pi - theta)/2.
        coeffs = pade_coefficients(n_terms, theta)
        for r in (0.25, 1.0, 4.0, 16.0):
            for sign in (+1.0, -1.0):
                z = sign * r - 1.0
                err = abs(pade_sqrt_scalar(z, coeffs) - rotated_sqrt(z, theta))
                ang = 0.5 * theta if sign > 0 else 0.5 * (np.pi - theta)
                sq = np.sqrt(r) * np.exp(1j * ang)
                g = abs((sq - 1.0) / (sq + 1.0)) ** (2 * n_terms + 1)
                bound = 2.0 * np.sqrt(r) * g / max(1.0 - g, 0.1)
                assert err <= bound + 1e-13 * (1.0 + np.sqrt(r))

    def test_bound_examples(self):
        eps_floor = 1e-14   # float evaluation noise of the 15-term sum
        # z = 0 (r = 1): approximation of 1
        c = pade_coefficients(15, np.pi / 3)
        assert abs(pade_sqrt_scalar(0.0, c) - 1.0) <= pade_error_bound(1.0, np.pi / 3, 15) + eps_floor
        # z = 3: sqrt(4) = 2
        assert abs(pade_sqrt_scalar(3.0, c) - 2.0) <= pade_error_bound(4.0, np.pi / 3, 15) + eps_floor
        # z = -2 (negative axis): rotated branch gives +i; gamma angle (pi-theta)/2
        want = rotated_sqrt(-2.0, np.pi / 3)
        assert want == pytest.approx(1j, abs=1e-14)
        sq = np.exp(0.5j * (np.pi - np.pi / 3))
        bound = 2.0 * abs((sq - 1.0) / (sq + 1.0)) ** 31
        assert abs(pade_sqrt_scalar(-2.0, c) - want) <= bound * 1.01


class TestMathieu:
    def test_q_zero(self):
        for n in range(7):
            assert mathieu_char("even", n, 0.0) == pytest.approx(n * n, abs=1e-12)
        for n in range(1, 7):
            assert mathieu_char("odd", n, 0.0) == pytest.approx(n * n, abs=1e-12)

    def test_ce0_q1(self):
        assert mathieu_char("even", 0, 1.0) == pytest.approx(-0.4551386, abs=1e-7)

    def test_against_scipy(self):
        for q in (0.5, 4.0, 25.0):
            for n in (0, 1, 2, 5, 11):
                assert mathieu_char("even", n, q) == pytest.approx(
                    float(mathieu_a(n, q)), rel=1e-9, abs=1e-9)
            for n in (1, 2, 5, 11):
                assert mathieu_char("odd", n, q) == pytest.approx(
                    float(mathieu_b(n, q)), rel=1e-9, abs=1e-9)

    def test_large_n_asymptotics(self):
        # a_n(q) - 2q -> n^2 - 2q + q^2 / (2 (n^2 - 1)) for fixed q
        for k in (2.0, 4.0):
            q = k * k / 4
            for n in range(int(4 * k), int(4 * k) + 17, 4):
                lam2 = mathieu_char("even", n, q) - 2 * q
                ref = n * n - 2 * q + q * q / (2 * (n * n - 1))
                assert abs(lam2 - ref) <= 5 * k**6 / n**4

    def test_bad_args(self):
        with pytest.raises(ValueError):
            mathieu_char("odd", 0, 1.0)
        with pytest.raises(ValueError):
            mathieu_char("even", -1, 1.0)
        with pytest.raises(ValueError):
            mathieu_char("even", 0, -1.0)
