"""Tests for the special-function kernel."""

import math

import numpy as np
import pytest
from scipy import integrate, special

from ballgreen.errors import ConvergenceError, DomainError, ZeroSearchError
from ballgreen.specfun import (
    Hyp2F1Params,
    bessel_first_zero,
    bessel_j,
    bessel_j_reduced,
    beta,
    gamma_inequality,
    hyp2f1,
    hyp2f1_derivative,
    ln_gamma,
    pochhammer,
)


class TestLnGamma:
    def test_known_values(self):
        """Test ln Gamma at 1, 5 and 1/2."""
        assert ln_gamma(1.0) == 0.0
        assert ln_gamma(5.0) == pytest.approx(math.log(24.0), abs=1e-14)
        assert ln_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), abs=1e-14)

    def test_recurrence(self):
        """Test that ln Gamma(x+1) - ln Gamma(x) = ln x across [0.1, 100]."""
        for x in np.linspace(0.1, 100.0, 50):
            assert ln_gamma(x + 1.0) - ln_gamma(x) == pytest.approx(math.log(x), abs=1e-12)

    def test_matches_scipy(self):
        """Test agreement with scipy's gammaln on [1e-3, 170]."""
        for x in np.geomspace(1e-3, 170.0, 40):
            assert math.exp(ln_gamma(x) - special.gammaln(x)) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
    def test_nonpositive_rejected(self, x):
        """Test that x <= 0 raises a domain error."""
        with pytest.raises(DomainError):
            ln_gamma(x)


class TestPochhammerAndBeta:
    def test_pochhammer(self):
        """Test the empty product, a direct product and factorials."""
        assert pochhammer(2.5, 0) == 1.0
        assert pochhammer(3.0, 4) == 360.0
        assert pochhammer(1.0, 6) == math.factorial(6)

    def test_pochhammer_negative_k(self):
        """Test that a negative count is rejected."""
        with pytest.raises(DomainError):
            pochhammer(1.0, -1)

    def test_beta_values(self):
        """Test Beta against elementary values and a quadrature oracle."""
        assert beta(1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
        assert beta(3.0, 1.0) == pytest.approx(1.0 / 3.0, rel=1e-14)
        assert beta(0.5, 0.5) == pytest.approx(math.pi, rel=1e-13)
        oracle, _ = integrate.quad(lambda r: r**1.5 * (1 - r) ** 0.25, 0, 1)
        assert beta(2.5, 1.25) == pytest.approx(oracle, rel=1e-10)

    def test_beta_rejects_nonpositive(self):
        """Test that non-positive arguments raise."""
        with pytest.raises(DomainError):
            beta(0.0, 1.0)


class TestGammaInequality:
    def test_sign_follows_hypothesis(self, rng):
        """Test that the log-gap has the sign of k(p-m-k)."""
        for _ in range(200):
            m, p = rng.uniform(0.2, 5.0, size=2)
            k = rng.uniform(-m, p)
            gap = gamma_inequality(m, p, k)
            assert gap * math.copysign(1.0, k * (p - m - k)) >= -1e-12

    def test_hypothesis_checked(self):
        """Test that k outside (-m, p) is rejected."""
        with pytest.raises(DomainError):
            gamma_inequality(1.0, 2.0, 2.5)


class TestHyp2F1:
    def test_origin(self):
        """Test that F(a, b; c; 0) = 1."""
        assert hyp2f1(0.3, -1.7, 2.2, 0.0) == 1.0

    def test_log_closed_form(self):
        """Test F(1, 1; 2; t) = -ln(1-t)/t on the direct and Pfaff zones."""
        assert hyp2f1(1.0, 1.0, 2.0, 0.5) == pytest.approx(2 * math.log(2.0), rel=1e-12)
        assert hyp2f1(1.0, 1.0, 2.0, -1.0) == pytest.approx(math.log(2.0), rel=1e-12)
        assert hyp2f1(1.0, 1.0, 2.0, 0.9) == pytest.approx(-math.log(0.1) / 0.9, rel=1e-10)

    def test_terminating_series(self):
        """Test a polynomial case F(-2, b; c; t) = 1 - 2bt/c + b(b+1)t^2/(c(c+1))."""
        b, c, t = 1.5, 2.5, 0.8
        expected = 1 - 2 * b * t / c + b * (b + 1) * t * t / (c * (c + 1))
        assert hyp2f1(-2.0, b, c, t) == pytest.approx(expected, rel=1e-13)

    def test_matches_scipy(self, rng):
        """Test against scipy's hyp2f1 across all evaluation zones."""
        for _ in range(200):
            a, b = rng.uniform(-2.0, 2.0, size=2)
            c = rng.uniform(0.5, 4.0)
            t = rng.uniform(-3.0, 0.9)
            expected = special.hyp2f1(a, b, c, t)
            assert hyp2f1(a, b, c, t) == pytest.approx(expected, rel=1e-9, abs=1e-10)

    def test_euler_and_pfaff(self, rng):
        """Test the classical (1-t) forms of Euler's and Pfaff's transformations."""
        for _ in range(100):
            b = rng.uniform(0.1, 3.0)
            c = b + rng.uniform(0.1, 4.0)
            a = rng.uniform(-3.0, 3.0)
            t = rng.uniform(0.0, 0.9)
            lhs = hyp2f1(a, b, c, t)
            euler = (1 - t) ** (c - a - b) * hyp2f1(c - a, c - b, c, t)
            pfaff = (1 - t) ** (-a) * hyp2f1(a, c - b, c, t / (t - 1))
            assert euler == pytest.approx(lhs, rel=1e-9, abs=1e-12)
            assert pfaff == pytest.approx(lhs, rel=1e-9, abs=1e-12)

    def test_kummer_quadratic(self, rng):
        """Test F(a, b; 2b; 4t/(1+t)^2) = (1+t)^(2a) F(a, a+1/2-b; b+1/2; t^2)."""
        for _ in range(100):
            a = rng.uniform(-2.0, 2.0)
            b = rng.uniform(0.3, 3.0)
            t = rng.uniform(0.0, 0.5)
            lhs = hyp2f1(a, b, 2 * b, 4 * t / (1 + t) ** 2)
            rhs = (1 + t) ** (2 * a) * hyp2f1(a, a + 0.5 - b, b + 0.5, t * t)
            assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)

    @pytest.mark.parametrize("c", [0.0, -1.0, -3.0])
    def test_pole_parameter_rejected(self, c):
        """Test that c in {0, -1, -2, ...} is rejected."""
        with pytest.raises(DomainError):
            hyp2f1(1.0, 1.0, c, 0.1)

    def test_argument_one_rejected(self):
        """Test that t >= 1 is outside the evaluated range."""
        with pytest.raises(DomainError):
            Hyp2F1Params(1.0, 1.0, 2.0, 1.0)

    def test_far_negative_argument(self):
        """Test t = -1e5 and below, where t/(t-1) is too close to 1 for the series."""
        t = -1e5
        assert hyp2f1(1.0, 1.0, 2.0, t) == pytest.approx(math.log1p(-t) / -t, rel=1e-12)
        for x in (10.0, 100.0, 1e3):
            # F(1/2, 1; 3/2; -x^2) = arctan(x)/x
            assert hyp2f1(0.5, 1.0, 1.5, -x * x) == pytest.approx(math.atan(x) / x, rel=1e-12)
        assert hyp2f1(0.3, 1.7, 1.7, -50.0) == pytest.approx(51.0**-0.3, rel=1e-12)

    def test_argument_near_one(self):
        """Test t = 1 - 1e-7, where the direct and Euler series would need ~1e7 terms."""
        w = 1e-7
        t = 1.0 - w
        assert hyp2f1(1.0, 1.0, 2.0, t) == pytest.approx(-math.log1p(-t) / t, rel=1e-12)
        # F(1/2, 1/2; 3/2; x^2) = arcsin(x)/x
        x = math.sqrt(t)
        expected = math.atan2(x, math.sqrt(1.0 - t)) / x
        assert hyp2f1(0.5, 0.5, 1.5, t) == pytest.approx(expected, rel=1e-12)
        assert hyp2f1(0.3, 1.7, 1.7, t) == pytest.approx((1.0 - t) ** -0.3, rel=1e-12)

    def test_series_cap(self):
        """Test that exceeding the term cap raises a convergence error."""
        with pytest.raises(ConvergenceError):
            hyp2f1(0.5, 0.5, 1.5, 0.49, max_terms=3)


class TestHyp2F1Derivative:
    def test_at_origin(self):
        """Test that the derivative at 0 is ab/c."""
        assert hyp2f1_derivative(1.0, 1.0, 2.0, 0.0) == 0.5

    @pytest.mark.parametrize(
        "a, b, c, t",
        [(1.0, 1.0, 2.0, 0.5), (2.0, 3.0, 4.0, 0.25), (-1.5, 0.5, 2.5, -0.7), (0.3, 1.2, 1.9, 0.8)],
    )
    def test_matches_finite_difference(self, a, b, c, t):
        """Test against a central difference with step 1e-6."""
        h = 1e-6
        fd = (hyp2f1(a, b, c, t + h) - hyp2f1(a, b, c, t - h)) / (2 * h)
        assert hyp2f1_derivative(a, b, c, t) == pytest.approx(fd, rel=1e-6)

    def test_log_case(self):
        """Test d/dt F(1, 1; 2; t) at t = 1/2 against the closed form."""
        t = 0.5
        expected = 1 / (t * (1 - t)) + math.log(1 - t) / (t * t)
        assert hyp2f1_derivative(1.0, 1.0, 2.0, t) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(1.2274113, abs=1e-7)


class TestBessel:
    def test_origin(self):
        """Test J_0(0) = 1 and J_alpha(0) = 0 for alpha > 0."""
        assert bessel_j(0.0, 0.0) == 1.0
        assert bessel_j(1.5, 0.0) == 0.0

    def test_half_order_closed_form(self):
        """Test J_(1/2)(t) = sqrt(2/(pi t)) sin t."""
        assert bessel_j(0.5, math.pi / 2) == pytest.approx(2 / math.pi, rel=1e-13)
        assert bessel_j(0.5, math.pi) == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 1.5, 2.5, 7.0])
    def test_matches_scipy(self, alpha):
        """Test the series against scipy's jv for t up to the series limit 12."""
        for t in np.linspace(0.05, 12.0, 60):
            expected = special.jv(alpha, t)
            assert bessel_j(alpha, t) == pytest.approx(expected, rel=1e-10, abs=1e-12)

    def test_large_argument_half_orders(self):
        """Test t in (12, 30] against the closed forms of J_(1/2) and J_(3/2)."""
        for t in np.linspace(12.5, 30.0, 36):
            scale = math.sqrt(2.0 / (math.pi * t))
            assert bessel_j(0.5, t) == pytest.approx(scale * math.sin(t), abs=1e-13)
            half3 = scale * (math.sin(t) / t - math.cos(t))
            assert bessel_j(1.5, t) == pytest.approx(half3, abs=1e-13)

    def test_negative_arguments_rejected(self):
        """Test the domain alpha >= 0, t >= 0."""
        with pytest.raises(DomainError):
            bessel_j(-0.5, 1.0)
        with pytest.raises(DomainError):
            bessel_j(0.5, -1.0)

    def test_reduced_form(self):
        """Test r^(-alpha) J_alpha(k r) on an array including r = 0."""
        r = np.array([0.0, 0.1, 0.5, 1.0])
        k, alpha = 3.0, 1.5
        values = bessel_j_reduced(alpha, k, r)
        assert values[0] == pytest.approx((k / 2) ** alpha / math.gamma(alpha + 1), rel=1e-14)
        expected = special.jv(alpha, k * r[1:]) / r[1:] ** alpha
        np.testing.assert_allclose(values[1:], expected, rtol=1e-12)

    def test_reduced_form_needs_positive_k(self):
        """Test that k <= 0 is rejected."""
        with pytest.raises(DomainError):
            bessel_j_reduced(0.5, 0.0, np.array([0.5]))


class TestBesselFirstZero:
    @pytest.mark.parametrize(
        "alpha, zero",
        [
            (0.0, 2.404825557695773),
            (0.5, math.pi),
            (1.0, 3.8317059702075125),
            (1.5, 4.493409457909064),
        ],
    )
    def test_known_zeros(self, alpha, zero):
        """Test the first zeros of J_0, J_(1/2), J_1 and J_(3/2)."""
        assert bessel_first_zero(alpha) == pytest.approx(zero, abs=1e-12)

    def test_matches_scipy_integer_orders(self):
        """Test integer orders against scipy's jn_zeros."""
        for order in range(5):
            assert bessel_first_zero(float(order)) == pytest.approx(
                special.jn_zeros(order, 1)[0], abs=1e-12
            )

    def test_failed_bracket(self, monkeypatch):
        """Test that a scan without sign change raises ZeroSearchError."""
        monkeypatch.setattr("ballgreen.specfun.bessel_j", lambda alpha, t: 1.0)
        bessel_first_zero.cache_clear()
        try:
            with pytest.raises(ZeroSearchError):
                bessel_first_zero(0.25)
        finally:
            bessel_first_zero.cache_clear()

    def test_negative_order_rejected(self):
        """Test that alpha < 0 is rejected."""
        with pytest.raises(DomainError):
            bessel_first_zero(-1.0)
