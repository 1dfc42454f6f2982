"""Tail-index estimation and Frechet goodness of fit."""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .validation import check_positive, check_positive_int, check_sample


class InsufficientDataError(ValueError):
    pass


def hill(values, k: int) -> float:
    """Hill estimate from the k largest values relative to the (k+1)-th.

    ``values`` need not be sorted. Raises if the (k+1)-th largest value is
    not positive.
    """
    x = check_sample(values, name="values")
    k = check_positive_int(k, "k")
    if k + 1 > x.size:
        raise InsufficientDataError(f"k={k} needs at least {k + 1} values, got {x.size}")
    top = -np.partition(-x, k)[: k + 1]
    top.sort()
    top = top[::-1]
    ref = top[k]
    if ref <= 0:
        raise InsufficientDataError("insufficient positive order statistics")
    return float(np.mean(np.log(top[:k] / ref)))


def intermediate_sequence(n: int, theta: float = 0.5) -> int:
    """k = ceil(n**theta) clamped to [1, n-1]."""
    n = check_positive_int(n, "n", minimum=2)
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    k = math.ceil(n**theta - 1e-9)
    return max(1, min(n - 1, k))


def frechet_cdf(z, gamma: float):
    gamma = check_positive(gamma, "gamma")
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    pos = z > 0
    out[pos] = np.exp(-z[pos] ** (-gamma))
    return out if out.ndim else float(out)


def frechet_quantile(u, gamma: float):
    gamma = check_positive(gamma, "gamma")
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise ValueError("levels must lie in (0, 1)")
    out = (-np.log(u)) ** (-1.0 / gamma)
    return out if out.ndim else float(out)


def ks_distance(sample, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance between a sample and a CDF."""
    x = np.sort(np.asarray(sample, dtype=float).reshape(-1))
    m = x.size
    if m == 0:
        raise ValueError("sample must be nonempty")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - f), np.max(f - (i - 1) / m)))


def tail_slope(sample, fraction: float = 0.01, min_points: int = 10) -> float:
    """Least-squares slope of log S(v) against log v over the top fraction.

    S(v) = #{X >= v} / N is evaluated at each distinct value among the
    ``ceil(fraction * N)`` largest observations, so ties in integer data
    collapse to one point. A regularly varying tail with index gamma gives
    a slope near -gamma.
    """
    x = check_sample(sample, name="sample")
    if not 0 < fraction <= 1:
        raise ValueError("fraction must lie in (0, 1]")
    n = x.size
    m = min(n, math.ceil(fraction * n - 1e-9))
    top = np.sort(x)[::-1][:m]
    top = top[top > 0]
    levels = np.unique(top)
    if levels.size < min_points:
        raise InsufficientDataError(
            f"need {min_points} distinct positive values in the top fraction, got {levels.size}"
        )
    xs = np.sort(x)
    surv = (n - np.searchsorted(xs, levels, side="left")) / n
    slope, _ = np.polyfit(np.log(levels), np.log(surv), 1)
    return float(slope)


class HillEstimator(BaseEstimator):
    """Hill estimator of 1/gamma as a scikit-learn estimator.

    Args:
        k: number of upper order statistics; if None it is chosen as
            ``ceil(n**theta)``.
        theta: exponent of the intermediate-sequence rule.

    Attributes:
        hill_: the estimate of 1/gamma.
        tail_index_: 1 / hill_.
        k_: the k used.
        stderr_: asymptotic standard error hill_ / sqrt(k_), for diagnostics.
    """

    def __init__(self, k=None, theta=0.5):
        self.k = k
        self.theta = theta

    def fit(self, X, y=None):
        x = check_sample(X)
        k = intermediate_sequence(x.size, self.theta) if self.k is None else self.k
        self.hill_ = hill(x, k)
        self.k_ = int(k)
        self.tail_index_ = math.inf if self.hill_ == 0 else 1.0 / self.hill_
        self.stderr_ = self.hill_ / math.sqrt(self.k_)
        self.n_samples_ = x.size
        return self

    def score(self, X, y=None):
        """Negative absolute deviation of the fitted estimate from ``y`` (1/gamma)."""
        check_is_fitted(self)
        return -abs(self.hill_ - float(y))


class TailSlopeEstimator(BaseEstimator):
    """Log-log survival slope; ``tail_index_`` is minus the slope."""

    def __init__(self, fraction=0.01, min_points=10):
        self.fraction = fraction
        self.min_points = min_points

    def fit(self, X, y=None):
        self.slope_ = tail_slope(X, self.fraction, self.min_points)
        self.tail_index_ = -self.slope_
        return self
