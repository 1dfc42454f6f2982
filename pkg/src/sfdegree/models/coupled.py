"""Joint construction of Norros-Reittu (G1), Chung-Lu (G2) and Poissonized Chung-Lu (G3)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as K
from .generate import _chung_lu_fast, _multigraph_degrees
from ..weights import WeightDistribution


@dataclass
class CoupledTriple:
    """Degrees of the three coupled graphs on a shared weight vector.

    ``discrepancy`` is D_E, the sum over ordered pairs (x, y) of
    ``|E2{x,y} - E3{x,y}|``, so each off-diagonal pair counts twice.
    """

    weights: np.ndarray
    total_weight: float
    deg1: np.ndarray
    deg2: np.ndarray
    deg3: np.ndarray
    event_a: bool
    discrepancy: int
    g1_differs: bool
    seed: Optional[int] = None


def bernoulli_poisson_pair(p, t):
    """Monotone coupling of Bernoulli(p) and Poisson(p) driven by ``t = 1 - U``."""
    p = np.asarray(p, dtype=float)
    t = np.asarray(t, dtype=float)
    bern = (t <= p).astype(np.int64)
    pois = K.poisson_from_tail_many(np.ravel(t).astype(float), np.ravel(p).astype(float))
    return bern, pois.reshape(bern.shape)


def coupling_gap(q: float) -> float:
    """E|I - J| for the monotone Bernoulli(q)/Poisson(q) coupling, in closed form.

    I = 1 exactly when U >= 1 - q and J >= 1 exactly when U >= e^{-q}; since
    1 - q <= e^{-q} the pair only disagrees through {I=1, J=0} or J >= 2, and
    E|I - J| = E[J] - E[I] + 2 P(I=1, J=0) = 2 (q - 1 + e^{-q}).
    """
    return 2.0 * (q - 1.0 + np.exp(-q))


def generate_coupled(n: int, dist: WeightDistribution, seed, weights=None) -> CoupledTriple:
    """Sample G1, G2, G3 on the same weights with one uniform per unordered pair.

    Pairs not selected in G2 have U < 1 - p, where both Poisson counts are 0
    as well, so only G2's edges need a second look: there ``T = 1 - U`` is
    uniform on (0, p].
    """
    rng = np.random.default_rng(seed)
    w = dist.sample(rng, n) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise ValueError(f"need {n} weights")
    total = float(w.sum())
    a, b = _chung_lu_fast(w, rng)
    mean = w[a] * w[b] / total
    p = np.minimum(mean, 1.0)
    t = p * (1.0 - rng.random(a.shape[0]))
    e3 = K.poisson_from_tail_many(t, p)
    e1 = e3.copy()
    big = mean > 1.0
    if np.any(big):
        e1[big] = K.poisson_from_tail_many(t[big], mean[big])
    ones = np.ones(a.shape[0], np.int64)
    diff = np.abs(ones - e3)
    d_e = int(np.sum(np.where(a == b, diff, 2 * diff)))
    return CoupledTriple(
        weights=w,
        total_weight=total,
        deg1=_multigraph_degrees(a, b, e1, n),
        deg2=_multigraph_degrees(a, b, ones, n),
        deg3=_multigraph_degrees(a, b, e3, n),
        event_a=bool(np.max(w) ** 2 <= total),
        discrepancy=d_e,
        g1_differs=bool(np.any(e1 != e3)),
        seed=seed,
    )
