"""Rescaled degree point processes on (0, inf] and their limit measure."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .validation import check_positive, check_sample, descending_order


@dataclass
class RescaledDegrees:
    """Point masses at degree / scale, stored in descending order.

    ``mass`` is 1 for the process over level n and 1/k for level n/k.
    """

    values: np.ndarray
    scale: float
    mass: float = 1.0
    k: Optional[int] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if np.any(v < 0):
            raise ValueError("rescaled values must be nonnegative")
        self.values = np.sort(v)[::-1]

    def __len__(self):
        return self.values.size

    def count(self, a, b=math.inf) -> float:
        return count_interval(self, a, b)

    def max(self) -> float:
        return float(self.values[0]) if self.values.size else 0.0


def _check_interval(a, b):
    if not a > 0:
        raise ValueError("left endpoint must be > 0: the measure is not finite near 0")
    if not b >= a:
        raise ValueError("need a <= b")


def count_interval(rpp: RescaledDegrees, a: float, b: float = math.inf) -> float:
    """mass * #{v : a < v <= b}."""
    _check_interval(a, b)
    asc = rpp.values[::-1]
    hi = asc.size if math.isinf(b) else np.searchsorted(asc, b, side="right")
    lo = np.searchsorted(asc, a, side="right")
    return rpp.mass * float(max(hi - lo, 0))


def rescale(sample, k: Optional[int] = None) -> RescaledDegrees:
    """Divide window degrees by xi * q(n) or, given k, by xi * q(n/k)."""
    sc = sample.scaling
    n = sample.config.n
    if k is None:
        q, mass = sc.q_n, 1.0
    else:
        if not 1 <= k < n:
            raise ValueError(f"k must satisfy 1 <= k < n={n}")
        q, mass = sc.q(sample.config.weight, n / k), 1.0 / k
    scale = sc.xi * q
    meta = {"model": sample.config.kind, "n": n, "seed": sample.seed}
    return RescaledDegrees(sample.degrees / scale, scale, mass, k, meta)


@dataclass(frozen=True)
class LimitMeasure:
    """nu_gamma((a, b]) = a**-gamma - b**-gamma on (0, inf]."""

    gamma: float

    def __post_init__(self):
        check_positive(self.gamma, "gamma")

    def __call__(self, a, b=math.inf) -> float:
        _check_interval(a, b)
        tail_b = 0.0 if math.isinf(b) else b ** (-self.gamma)
        return a ** (-self.gamma) - tail_b


def nu_measure(gamma: float, a: float, b: float = math.inf) -> float:
    return LimitMeasure(gamma)(a, b)


def order_statistic(degrees, k: int) -> int:
    """k-th largest degree (ties broken by vertex index, ascending)."""
    d = np.asarray(getattr(degrees, "degrees", degrees))
    if not 1 <= k <= d.size:
        raise ValueError(f"k={k} outside 1..{d.size}")
    return int(d[descending_order(d)[k - 1]])


def top_vertices(values, k: int) -> np.ndarray:
    """Indices of the k largest values with the same tie-breaking."""
    return descending_order(np.asarray(values))[:k]


class DegreeRescaler(TransformerMixin, BaseEstimator):
    """Learns the rescaling denominator xi * q(n/k) from a degree sample.

    ``n`` is taken from the number of samples seen in ``fit``; ``k=None``
    means level n.
    """

    def __init__(self, xi=1.0, weight=None, p=1.0, k=None):
        self.xi = xi
        self.weight = weight
        self.p = p
        self.k = k

    def fit(self, X, y=None):
        x = check_sample(X)
        n = x.size
        if self.weight is None:
            raise ValueError("a weight distribution is required")
        if self.k is not None and not 1 <= self.k < n:
            raise ValueError(f"k must satisfy 1 <= k < n={n}")
        level = n if self.k is None else n / self.k
        self.scale_ = float(self.xi) * self.weight.quantile_q(self.p, level)
        self.n_samples_ = n
        return self

    def transform(self, X):
        check_is_fitted(self)
        return check_sample(X, allow_empty=True) / self.scale_
