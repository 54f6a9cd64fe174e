import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from polydirich.errors import ConfigurationError, PreconditionError
from polydirich.integral import (beta_radial_weight, equivalence_constants, hardy_asymptotic_ratio,
                                 hardy_norm_sup, integral_norm_exact, integral_norm_quadrature,
                                 integral_norm_sq_exact, quadrature_rule)
from polydirich.series import TruncatedSeries
from polydirich.space import norm, norm_sq

from conftest import rand_series


class TestBetaWeights:
    def test_examples(self):
        assert beta_radial_weight(0, -1.0) == pytest.approx(0.5, rel=1e-15)
        assert beta_radial_weight(1, -1.0) == pytest.approx(0.25, rel=1e-15)
        assert beta_radial_weight(2, -2.0) == pytest.approx(1 / 24, rel=1e-15)

    @pytest.mark.parametrize("a", [-0.5, -1.3, -2.7])
    @pytest.mark.parametrize("k", [0, 3, 11])
    def test_against_direct_integral(self, a, k):
        val, _ = quad(lambda r: (1 - r * r) ** (-1 - a) * r ** (2 * k + 1), 0, 1, limit=200)
        assert beta_radial_weight(k, a) == pytest.approx(val, rel=1e-8)

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            beta_radial_weight(0, 0.0)


class TestHardyRatio:
    def test_alpha_minus_one(self):
        for k in (0, 1, 10, 1000, 10 ** 5):
            assert hardy_asymptotic_ratio(k, -1.0) == pytest.approx(0.5, rel=1e-14)

    def test_alpha_minus_two(self):
        for k in (0, 1, 10, 1000):
            assert hardy_asymptotic_ratio(k, -2.0) == pytest.approx((k + 1) / (2 * (k + 2)), rel=1e-14)

    def test_alpha_minus_half(self):
        lim = math.sqrt(math.pi) / 2
        assert abs(hardy_asymptotic_ratio(1000, -0.5) / lim - 1) < 1e-3
        assert abs(hardy_asymptotic_ratio(10 ** 5, -0.5) / lim - 1) < 1e-5

    def test_limit_is_gamma(self):
        a = -1.7
        assert hardy_asymptotic_ratio(10 ** 6, a) == pytest.approx(math.gamma(-a) / 2, rel=1e-5)


class TestIntegralNorm:
    def test_examples(self):
        assert integral_norm_exact(TruncatedSeries.constant(1.0), (-1, -1)) == pytest.approx(1.0, rel=1e-15)
        assert integral_norm_exact(TruncatedSeries.monomial(1, 0), (-1, -1)) == pytest.approx(math.sqrt(0.5))

    def test_quadrature_examples(self):
        assert abs(integral_norm_quadrature(TruncatedSeries.constant(1.0), (-1, -1)) - 1) < 1e-12
        f = TruncatedSeries(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert abs(integral_norm_quadrature(f, (-1, -1)) - 1) < 1e-10

    def test_unit_weight_is_exact(self, rng):
        for _ in range(20):
            f = rand_series(rng, *rng.integers(0, 40, 2))
            assert integral_norm_exact(f, (-1, -1)) / norm(f, (-1, -1)) == pytest.approx(1.0, abs=1e-12)

    def test_zero_component_uses_parseval(self, rng):
        f = rand_series(rng, 6, 6)
        ex = integral_norm_sq_exact(f, (-1.0, 0.0))
        assert ex == pytest.approx(norm_sq(f, (-1.0, 0.0)), rel=1e-13)

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            integral_norm_exact(TruncatedSeries.constant(1.0), (0.5, -1))
        with pytest.raises(PreconditionError):
            integral_norm_quadrature(TruncatedSeries.constant(1.0), (0.0, -1))

    def test_quadrature_self_convergence(self, rng):
        f = rand_series(rng, 16, 16)
        a = (-0.5, -0.5)
        fine = integral_norm_quadrature(f, a, quadrature_rule(a, f.deg, radial_count=20))
        coarse = integral_norm_quadrature(f, a, quadrature_rule(a, f.deg, radial_count=10))
        assert abs(fine - coarse) < 1e-8

    def test_too_few_angles(self, rng):
        f = rand_series(rng, 8, 8)
        with pytest.raises(ConfigurationError):
            integral_norm_quadrature(f, (-1, -1), quadrature_rule((-1, -1), f.deg, angular_count=9))

    def test_brackets(self, rng):
        a = (-1.5, -0.5)
        d = 30
        lo, hi = equivalence_constants(a, (d, d))
        for _ in range(50):
            f = rand_series(rng, d, d)
            r = integral_norm_sq_exact(f, a) / norm_sq(f, a)
            assert lo * (1 - 1e-12) <= r <= hi * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(a1=st.floats(-3, -0.1), a2=st.floats(-3, -0.1), seed=st.integers(0, 2 ** 32 - 1),
       deg=st.integers(0, 64))
def test_quadrature_matches_exact(a1, a2, seed, deg):
    rng = np.random.default_rng(seed)
    f = rand_series(rng, deg, int(rng.integers(0, deg + 1)))
    ex = integral_norm_exact(f, (a1, a2))
    assert abs(integral_norm_quadrature(f, (a1, a2)) - ex) <= 1e-8 * max(ex, 1.0)


class TestHardyNorm:
    def test_constant(self):
        res = hardy_norm_sup(TruncatedSeries.constant(1.0), [0.0, 0.5, 0.99])
        assert res.limit == 1.0
        assert all(p[1] == 1.0 for p in res.profile)

    def test_z(self):
        res = hardy_norm_sup(TruncatedSeries.monomial(1, 0), np.linspace(0, 0.99, 100))
        assert res.limit == 1.0
        assert res.grid_max_sq == pytest.approx(0.9801, rel=1e-14)
        assert res.grid_max == pytest.approx(0.99, rel=1e-14)

    def test_parseval(self, rng):
        f = rand_series(rng, 9, 4)
        assert hardy_norm_sup(f, [0.5]).limit == pytest.approx(norm(f, (0, 0)), rel=1e-15)

    def test_bad_radius(self):
        with pytest.raises(ConfigurationError):
            hardy_norm_sup(TruncatedSeries.constant(1.0), [1.0])


class TestEquivalenceConstants:
    def test_unit_weight(self):
        lo, hi = equivalence_constants((-1, -1), (64, 64))
        assert lo == pytest.approx(1.0, rel=1e-13) and hi == pytest.approx(1.0, rel=1e-13)

    def test_alpha_minus_two_large_box(self):
        lo, hi = equivalence_constants((-2, -2), (2048, 2048))
        assert 0.2 <= lo <= 1.1 and 0.2 <= hi <= 1.1
        assert hi / lo < 5
