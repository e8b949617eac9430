import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats as sps
from statsmodels.tsa.stattools import acf as sm_acf

from stylefacts import stats as S

series = arrays(np.float64, st.integers(8, 200),
                elements=st.floats(-1e3, 1e3, allow_nan=False, allow_subnormal=False))


def nonconstant(x):
    return np.ptp(x) > 1e-6 * max(1.0, np.abs(x).max())


def laplace(rng, n):
    return rng.laplace(size=n)


class TestLogReturns:
    def test_log_spaced(self):
        z = S.log_returns([1.0, math.e, math.e ** 2], 1)
        assert np.allclose(z.values, [1.0, 1.0], atol=1e-15)
        assert z.delta == 1 and z.source_len == 3 and len(z) == 2

    def test_constant_prices(self):
        for dl in (1, 3, 7):
            assert not S.log_returns(np.full(20, 42.0), dl).values.any()

    @given(arrays(np.float64, st.integers(12, 300), elements=st.floats(1e-3, 1e3)),
           st.integers(1, 10))
    def test_telescoping(self, prices, dl):
        z1 = S.log_returns(prices, 1).values
        zd = S.log_returns(prices, dl).values
        assert len(zd) == len(prices) - dl
        summed = np.array([z1[i:i + dl].sum() for i in range(len(zd))])
        assert np.allclose(zd, summed, rtol=0, atol=dl * 1e-12 * max(1.0, np.abs(np.log(prices)).max()))

    @pytest.mark.parametrize("prices, dl", [([1.0, 0.0, 2.0], 1), ([1.0, -2.0, 3.0], 1),
                                            ([1.0, 2.0], 2), ([1.0, 2.0, 3.0], 0)])
    def test_errors(self, prices, dl):
        with pytest.raises(ValueError):
            S.log_returns(prices, dl)


class TestNormalize:
    def test_two_points(self):
        z = S.normalize(np.array([1.0, -1.0]))
        assert np.allclose(z.values, [1 / math.sqrt(2), -1 / math.sqrt(2)], atol=1e-15)
        assert z.normalized

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            S.normalize(np.full(10, 3.0))

    @given(series)
    def test_moments(self, x):
        if not nonconstant(x):
            return
        z = S.normalize(x).values
        assert abs(z.mean()) < 1e-10
        assert abs(z.std(ddof=1) - 1) < 1e-10

    @given(series, st.floats(1e-3, 1e3), st.floats(-1e3, 1e3))
    def test_affine_invariance(self, x, a, b):
        if not nonconstant(x):
            return
        assert np.allclose(S.normalize(a * x + b).values, S.normalize(x).values, atol=1e-7)

    def test_idempotent(self):
        z = S.normalize(np.random.default_rng(1).normal(size=500))
        assert np.allclose(S.normalize(z).values, z.values, atol=1e-10)

    def test_keeps_metadata(self):
        z = S.normalize(S.log_returns(np.exp(np.arange(30.0) ** 0.5), 3))
        assert (z.delta, z.source_len, z.normalized) == (3, 30, True)


class TestKurtosis:
    def test_two_point(self):
        assert S.excess_kurtosis(np.tile([1.0, -1.0], 50)) == pytest.approx(-2.0, abs=1e-12)

    def test_matches_scipy(self):
        x = np.random.default_rng(2).standard_t(5, size=5000)
        assert S.excess_kurtosis(x) == pytest.approx(sps.kurtosis(x, fisher=True, bias=True), rel=1e-10)

    def test_normal_monte_carlo(self):
        x = np.random.default_rng(3).standard_normal(1_000_000)
        assert abs(S.excess_kurtosis(x)) < 0.05

    def test_laplace_monte_carlo(self):
        x = laplace(np.random.default_rng(4), 1_000_000)
        assert S.excess_kurtosis(x) == pytest.approx(3.0, abs=0.2)

    @given(series, st.floats(1e-2, 1e2), st.floats(-1e2, 1e2), st.booleans())
    def test_affine_invariance(self, x, a, b, flip):
        if not nonconstant(x):
            return
        a = -a if flip else a
        assert S.excess_kurtosis(a * x + b) == pytest.approx(S.excess_kurtosis(x), rel=1e-6, abs=1e-6)

    def test_degenerate(self):
        with pytest.raises(ValueError):
            S.excess_kurtosis([1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            S.excess_kurtosis(np.ones(10))


class TestShapiroFrancia:
    def test_perfect_fit(self):
        w, p = S.shapiro_francia(S.normal_scores(200))
        assert w == pytest.approx(1.0, abs=1e-12)
        assert p > 0.5

    def test_statistic_is_squared_correlation(self):
        x = np.random.default_rng(5).gamma(2.0, size=300)
        w, _ = S.shapiro_francia(x)
        scores = sps.norm.ppf((np.arange(1, 301) - 0.375) / 300.25)
        r = sps.pearsonr(np.sort(x), scores)[0]
        assert w == pytest.approx(r * r, rel=1e-12)

    @pytest.mark.parametrize("n", [4, 5001])
    def test_size_limits(self, n):
        with pytest.raises(ValueError):
            S.shapiro_francia(np.random.default_rng(0).normal(size=n))

    def test_zero_variance(self):
        with pytest.raises(ValueError):
            S.shapiro_francia(np.ones(50))

    def test_outlier_monotonicity(self):
        base = np.random.default_rng(6).normal(size=400)
        ws = [S.shapiro_francia(np.append(base, c))[0] for c in (4, 6, 10, 20, 50, 200)]
        assert all(b < a for a, b in zip(ws, ws[1:]))

    def test_normal_p_values_roughly_uniform(self):
        rng = np.random.default_rng(7)
        ps = np.array([S.shapiro_francia(rng.standard_normal(5000))[1] for _ in range(300)])
        assert sps.kstest(ps, "uniform").pvalue > 0.001

    def test_laplace_power(self):
        rng = np.random.default_rng(8)
        ps = [S.shapiro_francia(laplace(rng, 5000))[1] for _ in range(100)]
        assert sum(p < 0.001 for p in ps) >= 99

    def test_subsample(self):
        x = np.arange(23_456.0)
        sub = S.subsample(x, 5000, seed=3)
        assert len(sub) == 5000
        assert np.all(np.diff(sub) == 4)
        assert np.array_equal(sub, S.subsample(x, 5000, seed=3))
        assert S.subsample(x[:100], 5000) is not None and len(S.subsample(x[:100], 5000)) == 100


class TestAcf:
    def test_lag_zero(self):
        assert S.acf(np.random.default_rng(0).normal(size=50), 5)[0] == 1.0

    @given(arrays(np.float64, st.integers(20, 200), elements=st.floats(-1e3, 1e3)))
    def test_bounds_and_statsmodels(self, x):
        if not nonconstant(x):
            return
        k = len(x) // 2 - 1
        r = S.acf(x, k)
        assert np.all(np.abs(r) <= 1 + 1e-12)
        assert np.allclose(r, sm_acf(x, nlags=k, adjusted=False, fft=False), atol=1e-9)

    def test_white_noise_band(self):
        x = np.random.default_rng(9).normal(size=100_000)
        r = S.acf(x, 200)[1:]
        assert np.mean(np.abs(r) < 2 / math.sqrt(len(x))) > 0.9

    def test_ar1(self):
        rng = np.random.default_rng(10)
        e = rng.normal(size=1_000_000)
        x = np.empty_like(e)
        x[0] = e[0]
        for t in range(1, len(e)):
            x[t] = 0.5 * x[t - 1] + e[t]
        r = S.acf(x, 10)
        assert np.all(np.abs(r - 0.5 ** np.arange(11)) < 0.01)

    def test_max_lag_limit(self):
        with pytest.raises(ValueError):
            S.acf(np.arange(10.0), 5)

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            S.acf(np.ones(50), 3)


class TestPowerLaw:
    def test_planted_exponent(self):
        k = np.arange(0, 101, dtype=float)
        acf = np.r_[1.0, k[1:] ** -0.3]
        fit = S.power_law_fit(acf, 1, 100)
        assert abs(fit.exponent + 0.3) < 1e-9
        assert fit.r2 == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=50)
    @given(st.floats(-3.0, -0.01), st.floats(0.01, 10.0))
    def test_recovers_any_exponent(self, beta, c):
        k = np.arange(0, 101, dtype=float)
        acf = np.r_[1.0, c * k[1:] ** beta]
        fit = S.power_law_fit(acf, 1, 100)
        assert abs(fit.exponent - beta) < 1e-9
        assert fit.r2 == pytest.approx(1.0, abs=1e-9)

    def test_exponential_fits_worse(self):
        k = np.arange(101, dtype=float)
        exp_fit = S.power_law_fit(0.9 ** k, 1, 100)
        pow_fit = S.power_law_fit(np.r_[1.0, k[1:] ** -0.3], 1, 100)
        assert exp_fit.r2 < pow_fit.r2 - 0.1

    def test_truncates_at_nonpositive(self):
        acf = np.r_[1.0, np.arange(1, 101, dtype=float) ** -0.5]
        acf[40] = -0.01
        fit = S.power_law_fit(acf, 1, 100)
        assert (fit.lag_lo, fit.lag_hi) == (1, 39)
        assert abs(fit.exponent + 0.5) < 1e-9

    def test_unusable_range(self):
        fit = S.power_law_fit(np.array([1.0, -0.2, 0.1, 0.1]), 1, 3)
        assert not fit.ok and math.isnan(fit.r2)


class TestKurtosisByDelta:
    def test_geometric_random_walk(self):
        rng = np.random.default_rng(12)
        prices = 100 * np.exp(np.cumsum(rng.normal(0, 0.01, 200_000)))
        table = S.kurtosis_by_delta(prices, [1, 10, 100])
        assert list(table) == [1, 10, 100]
        assert abs(table[1]) < 0.1
        assert abs(table[10]) < 0.15
        assert abs(table[100]) < 0.5

    def test_delta_limit(self):
        with pytest.raises(ValueError):
            S.kurtosis_by_delta(np.linspace(1, 2, 100), [10])


class TestHistogram:
    def test_uniform(self):
        x = np.random.default_rng(13).random(1_000_000)
        centers, dens = S.histogram_density(x, 10)
        assert np.all(np.abs(dens - 1) < 0.02)
        assert np.allclose(centers, np.linspace(0.05, 0.95, 10), atol=1e-5)

    @given(arrays(np.float64, st.integers(50, 500), elements=st.floats(-1e3, 1e3)))
    def test_integrates_to_one(self, x):
        if not nonconstant(x):
            return
        centers, dens = S.histogram_density(x, 20)
        width = centers[1] - centers[0]
        assert abs(dens.sum() * width - 1) < 1e-6

    def test_empty_range(self):
        with pytest.raises(ValueError):
            S.histogram_density(np.ones(100), 10)

    def test_too_short(self):
        with pytest.raises(ValueError):
            S.histogram_density(np.arange(5.0), 10)
