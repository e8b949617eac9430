"""Statistics for the stylised facts of a return series."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr, ndtri

SF_MIN_N = 5
SF_MAX_N = 5000


@dataclass(frozen=True)
class ReturnSeries:
    values: np.ndarray
    delta: int = 1
    normalized: bool = False
    source_len: int = 0

    def __len__(self):
        return len(self.values)


def _values(series) -> np.ndarray:
    if isinstance(series, ReturnSeries):
        return series.values
    return np.asarray(series, dtype=float)


def log_returns(prices, delta: int = 1) -> ReturnSeries:
    """Overlapping log returns ``log S[i+delta] - log S[i]``."""
    prices = np.asarray(prices, dtype=float)
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    if len(prices) <= delta:
        raise ValueError(f"need more than {delta} prices, got {len(prices)}")
    if not np.all(prices > 0):
        raise ValueError("prices must be strictly positive")
    lp = np.log(prices)
    return ReturnSeries(lp[delta:] - lp[:-delta], delta, False, len(prices))


def normalize(series) -> ReturnSeries:
    x = _values(series)
    if len(x) < 2:
        raise ValueError("need at least two values to normalize")
    sd = x.std(ddof=1)
    if not sd > 0:
        raise ValueError("cannot normalize a zero-variance series")
    z = (x - x.mean()) / sd
    if isinstance(series, ReturnSeries):
        return ReturnSeries(z, series.delta, True, series.source_len)
    return ReturnSeries(z, 1, True, len(x))


def excess_kurtosis(series) -> float:
    """``m4 / m2**2 - 3`` from central sample moments."""
    x = _values(series)
    if len(x) < 4:
        raise ValueError("need at least four values")
    c = x - x.mean()
    m2 = np.mean(c * c)
    if not m2 > 0:
        raise ValueError("zero-variance series")
    return float(np.mean(c ** 4) / m2 ** 2 - 3.0)


def normal_scores(n: int) -> np.ndarray:
    """Blom-type estimates of expected normal order statistics."""
    i = np.arange(1, n + 1)
    return ndtri((i - 0.375) / (n + 0.25))


def shapiro_francia(series) -> tuple[float, float]:
    """Shapiro-Francia W' and its p-value (Royston's log-normal approximation).

    Valid for 5 <= n <= 5000; use :func:`subsample` for longer series.
    """
    x = np.sort(_values(series))
    n = len(x)
    if not SF_MIN_N <= n <= SF_MAX_N:
        raise ValueError(f"Shapiro-Francia needs {SF_MIN_N} <= n <= {SF_MAX_N}, got {n}")
    if not np.ptp(x) > 0:
        raise ValueError("zero-variance series")
    y = normal_scores(n)
    xc = x - x.mean()
    yc = y - y.mean()
    w = float(np.dot(xc, yc) ** 2 / (np.dot(xc, xc) * np.dot(yc, yc)))
    w = min(w, 1.0)
    u = np.log(n)
    v = np.log(u)
    mu = -1.2725 + 1.0521 * (v - u)
    sigma = 1.0308 - 0.26758 * (v + 2.0 / u)
    if w >= 1.0:
        return w, 1.0
    z = (np.log1p(-w) - mu) / sigma
    return w, float(ndtr(-z))


def subsample(series, size: int = SF_MAX_N, seed: int = 0) -> np.ndarray:
    """Evenly strided subsample with a seeded random phase."""
    x = _values(series)
    if len(x) <= size:
        return x
    stride = len(x) // size
    offset = int(np.random.default_rng(seed).integers(stride))
    return x[offset::stride][:size]


def acf(series, max_lag: int) -> np.ndarray:
    """Sample autocorrelation at lags ``0..max_lag`` (biased covariance estimator)."""
    x = _values(series)
    n = len(x)
    if not max_lag < n / 2:
        raise ValueError(f"max_lag must be < n/2 = {n / 2}, got {max_lag}")
    c = x - x.mean()
    c0 = np.dot(c, c)
    if not c0 > 0:
        raise ValueError("zero-variance series")
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for k in range(1, max_lag + 1):
        out[k] = np.dot(c[:-k], c[k:]) / c0
    return out


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    r2: float
    lag_lo: int
    lag_hi: int

    @property
    def ok(self) -> bool:
        return np.isfinite(self.exponent)


def power_law_fit(acf_values, lag_lo: int = 1, lag_hi: int = 100) -> PowerLawFit:
    """Least-squares line through ``(log k, log acf[k])`` for ``lag_lo <= k <= lag_hi``.

    The range is cut just before the first nonpositive value; with fewer than
    two usable lags the exponent and r2 are NaN.
    """
    acf_values = np.asarray(acf_values, dtype=float)
    if lag_lo < 1:
        raise ValueError(f"lag_lo must be >= 1, got {lag_lo}")
    hi = min(lag_hi, len(acf_values) - 1)
    seg = acf_values[lag_lo:hi + 1]
    bad = np.flatnonzero(~(seg > 0))
    if bad.size:
        hi = lag_lo + int(bad[0]) - 1
        seg = seg[:bad[0]]
    if len(seg) < 2:
        return PowerLawFit(float("nan"), float("nan"), lag_lo, hi)
    lx = np.log(np.arange(lag_lo, hi + 1, dtype=float))
    ly = np.log(seg)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 - np.sum(resid ** 2) / ss_tot if ss_tot > 0 else 1.0
    return PowerLawFit(float(slope), float(r2), lag_lo, hi)


def kurtosis_by_delta(prices, deltas) -> dict[int, float]:
    n = len(prices)
    if max(deltas) >= n / 10:
        raise ValueError(f"largest delta must be < len(prices)/10 = {n / 10}")
    return {int(dl): excess_kurtosis(log_returns(prices, dl)) for dl in deltas}


def histogram_density(series, bin_count: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Bin centres and densities integrating to one over the data range."""
    x = _values(series)
    if len(x) < bin_count:
        raise ValueError(f"need at least {bin_count} values, got {len(x)}")
    if not np.ptp(x) > 0:
        raise ValueError("data has an empty range")
    dens, edges = np.histogram(x, bins=bin_count, density=True)
    return 0.5 * (edges[1:] + edges[:-1]), dens


@dataclass
class StatsReport:
    excess_kurtosis: float = float("nan")
    sf_statistic: float = float("nan")
    sf_p_value: float = float("nan")
    acf_signed: np.ndarray = field(default_factory=lambda: np.empty(0))
    acf_abs: np.ndarray = field(default_factory=lambda: np.empty(0))
    powerlaw_exponent: float = float("nan")
    powerlaw_r2: float = float("nan")
    kurtosis_by_delta: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "excess_kurtosis": self.excess_kurtosis,
            "sf_statistic": self.sf_statistic,
            "sf_p_value": self.sf_p_value,
            "acf_signed": [float(v) for v in self.acf_signed],
            "acf_abs": [float(v) for v in self.acf_abs],
            "powerlaw_exponent": self.powerlaw_exponent,
            "powerlaw_r2": self.powerlaw_r2,
            "kurtosis_by_delta": {str(k): v for k, v in self.kurtosis_by_delta.items()},
        }
