import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from dpnoise.errors import DomainError
from dpnoise.fisher import second_moment_exact
from dpnoise.lp_sampler import (
    NormPowerDensity,
    lp_norm,
    norm_concentration_check,
    sample_independent,
    sample_lp_sphere,
    sample_norm_power,
)


class TestNorm:
    def test_values(self):
        x = np.array([[3.0, -4.0], [0.0, 0.0]])
        np.testing.assert_allclose(lp_norm(x, 2.0), [5.0, 0.0])
        np.testing.assert_allclose(lp_norm(x, 1.0), [7.0, 0.0])
        np.testing.assert_allclose(lp_norm(x, np.inf), [4.0, 0.0])

    def test_no_overflow(self):
        assert lp_norm(np.array([1e300, 1e300]), 4.0) == pytest.approx(1e300 * 2 ** 0.25)

    @settings(max_examples=50, deadline=None)
    @given(
        x=st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=8),
        p=st.floats(1.0, 10.0),
        s=st.floats(0.01, 100.0),
    )
    def test_homogeneous(self, x, p, s):
        x = np.array(x)
        assert lp_norm(s * x, p) == pytest.approx(s * lp_norm(x, p), rel=1e-12, abs=1e-300)


class TestDensity:
    @pytest.mark.parametrize("kwargs", [dict(n=0, p=2, alpha=2), dict(n=2, p=0.5, alpha=2), dict(n=2, p=2, alpha=0.9), dict(n=2, p=2, alpha=2, c=0)])
    def test_validation(self, kwargs):
        with pytest.raises(DomainError):
            NormPowerDensity(**kwargs)

    def test_dimension_check(self):
        with pytest.raises(DomainError):
            NormPowerDensity(3, 2.0, 2.0).phi(np.zeros(2))

    def test_roundtrip(self):
        d = NormPowerDensity(5, math.pi, math.e, 0.3)
        assert NormPowerDensity.from_dict(d.to_dict()) == d
        with pytest.raises(DomainError):
            NormPowerDensity.from_dict({**d.to_dict(), "q": 1})

    @pytest.mark.parametrize("p,alpha", [(1.5, 2.0), (2.0, 2.0), (3.0, 1.0), (math.pi, math.e), (4.0, 3.0)])
    def test_gradient_matches_finite_difference(self, p, alpha):
        d = NormPowerDensity(4, p, alpha, 0.7)
        rng = np.random.default_rng(0)
        x = rng.standard_normal((5, 4))
        h = 1e-6
        fd = np.stack([(d.phi(x + h * e) - d.phi(x - h * e)) / (2 * h) for e in np.eye(4)], axis=1)
        np.testing.assert_allclose(d.grad_phi(x), fd, rtol=1e-6, atol=1e-7)

    def test_gradient_p_one(self):
        d = NormPowerDensity(3, 1.0, 2.0)
        x = np.array([[1.0, -2.0, 0.5]])
        np.testing.assert_allclose(d.grad_phi(x), 2 * 3.5 * np.sign(x))

    def test_gradient_at_origin(self):
        assert np.all(NormPowerDensity(3, 3.0, 2.0).grad_phi(np.zeros((1, 3))) == 0.0)


class TestSamplers:
    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, 8.0])
    def test_independent_marginal(self, p):
        # |X_i|^p ~ Gamma(1/p) with random sign
        x = sample_independent(p, 3, 20000, seed=1)
        assert stats.kstest(np.abs(x[:, 0]) ** p, stats.gamma(1.0 / p).cdf).statistic < 0.015

    def test_independent_gaussian_and_laplace(self):
        g = sample_independent(2.0, 2, 20000, seed=2)[:, 1]
        assert stats.kstest(g, stats.norm(scale=math.sqrt(0.5)).cdf).statistic < 0.015
        lap = sample_independent(1.0, 2, 20000, seed=3)[:, 0]
        assert stats.kstest(lap, stats.laplace.cdf).statistic < 0.015

    def test_gamma_root_never_zero(self):
        x = sample_independent(50.0, 4, 50000, seed=0)
        assert np.all(np.abs(x) > 0.0)

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.5])
    def test_sphere(self, p):
        x = sample_lp_sphere(p, 5, 1000, seed=0)
        np.testing.assert_allclose(lp_norm(x, p), 1.0, rtol=1e-12)

    @pytest.mark.parametrize("p", [1.0, 2.5, 4.0])
    def test_norm_power_matches_independent(self, p):
        d = NormPowerDensity(4, p, p)
        a = sample_norm_power(d, 10000, seed=6)
        b = sample_independent(p, 4, 10000, seed=7)
        for i in range(4):
            assert stats.ks_2samp(a[:, i], b[:, i]).statistic < 0.03

    @pytest.mark.parametrize("n,p,alpha,c", [(10, math.pi, math.e, 1.0), (3, 1.5, 3.0, 0.4), (6, 2.0, 1.0, 2.0)])
    def test_second_moment(self, n, p, alpha, c):
        x = sample_norm_power(NormPowerDensity(n, p, alpha, c), 100_000, seed=8)
        sq = np.sum(x * x, axis=1)
        se = sq.std() / math.sqrt(sq.size)
        assert abs(sq.mean() - second_moment_exact(n, p, alpha, c)) < 5 * se

    def test_radius_law(self):
        # ||X||_p^alpha ~ Gamma(n/alpha) at c = 1
        d = NormPowerDensity(5, 3.0, 2.5)
        r = lp_norm(sample_norm_power(d, 20000, seed=9), 3.0) ** 2.5
        assert stats.kstest(r, stats.gamma(5 / 2.5).cdf).statistic < 0.015

    def test_coefficient_scaling_is_exact(self):
        a = sample_norm_power(NormPowerDensity(3, 2.0, 3.0, 1.0), 100, seed=1)
        b = sample_norm_power(NormPowerDensity(3, 2.0, 3.0, 8.0), 100, seed=1)
        np.testing.assert_allclose(b, a / 2.0, rtol=1e-14)

    def test_deterministic_prefix_and_jobs(self):
        d = NormPowerDensity(7, 2.0, 2.0)
        a = sample_norm_power(d, 30000, seed=4)
        np.testing.assert_array_equal(a, sample_norm_power(d, 30000, seed=4, n_jobs=4))
        np.testing.assert_array_equal(a[:10], d.sample(10, 4))

    @pytest.mark.parametrize("count", [0, 2.5])
    def test_bad_count(self, count):
        with pytest.raises(DomainError):
            sample_independent(2.0, 2, count, seed=0)

    def test_concentration(self):
        small = norm_concentration_check(NormPowerDensity(5, 2.0, 2.0), 5000, seed=0)
        big = norm_concentration_check(NormPowerDensity(500, 2.0, 2.0), 5000, seed=0)
        assert big["iqr"] < small["iqr"]
        assert big["median"] == pytest.approx(1.0, abs=0.01)
