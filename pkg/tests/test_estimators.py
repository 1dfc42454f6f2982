"""Tests for Hill, KS and tail-slope estimators."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfdegree.estimators import (
    HillEstimator,
    InsufficientDataError,
    TailSlopeEstimator,
    frechet_cdf,
    frechet_quantile,
    hill,
    intermediate_sequence,
    ks_distance,
    tail_slope,
)
from sfdegree.weights import WeightDistribution

from _oracles import pareto_grid


class TestHill:
    def test_direct_formula(self):
        vals = np.exp([3.0, 2.0, 1.0, 0.0])
        assert hill(vals, 3) == pytest.approx(2.0)

    def test_unsorted_input(self):
        assert hill(np.exp([1.0, 3.0, 0.0, 2.0]), 3) == pytest.approx(2.0)

    @given(
        st.lists(st.floats(0.1, 1e6), min_size=3, max_size=60),
        st.floats(1e-3, 1e3),
    )
    def test_scale_invariant(self, vals, c):
        x = np.array(vals)
        k = len(vals) - 1
        assert hill(c * x, k) == pytest.approx(hill(x, k), rel=1e-9, abs=1e-12)

    def test_insufficient(self):
        with pytest.raises(InsufficientDataError):
            hill([3.0, 2.0], 2)
        with pytest.raises(InsufficientDataError):
            hill([3.0, 0.0, 0.0], 1)

    def test_iid_pareto_consistency(self):
        rng = np.random.default_rng(0)
        dist = WeightDistribution.pareto(2)
        hits = sum(abs(hill(dist.sample(rng, 10**5), 316) - 0.5) <= 0.05 for _ in range(200))
        # the estimate is close to N(1/2, 1/(4k)), so the band is +-1.78 sd: 92.5% expected
        assert hits >= 0.88 * 200

    def test_estimator_api(self):
        rng = np.random.default_rng(1)
        x = WeightDistribution.pareto(3).sample(rng, 10**4)
        est = HillEstimator(theta=0.5).fit(x)
        assert est.k_ == 100
        assert est.tail_index_ == pytest.approx(1 / est.hill_)
        assert est.stderr_ == pytest.approx(est.hill_ / 10)
        assert est.score(x, 1 / 3) <= 0
        assert HillEstimator(k=50).fit(x).k_ == 50
        assert est.get_params() == {"k": None, "theta": 0.5}


class TestIntermediate:
    def test_values(self):
        assert intermediate_sequence(10**4, 0.5) == 100
        assert intermediate_sequence(2, 0.9) == 1
        assert intermediate_sequence(10**5, 0.4) == 100

    @given(st.integers(2, 10**9), st.floats(0.01, 0.99))
    def test_range(self, n, theta):
        assert 1 <= intermediate_sequence(n, theta) <= n - 1

    def test_bad_theta(self):
        with pytest.raises(ValueError):
            intermediate_sequence(100, 1.0)


class TestFrechet:
    def test_values(self):
        assert frechet_cdf(1.0, 3.7) == pytest.approx(math.exp(-1))
        assert frechet_cdf(2.0, 2.0) == pytest.approx(math.exp(-0.25))
        assert frechet_cdf(1e-8, 2.0) == 0.0
        assert frechet_cdf(0.0, 2.0) == 0.0

    @given(st.floats(0.01, 0.99), st.floats(0.2, 5))
    def test_quantile_inverts(self, u, g):
        assert frechet_cdf(frechet_quantile(u, g), g) == pytest.approx(u, rel=1e-9)


class TestKS:
    @pytest.mark.parametrize("m", [1, 5, 100])
    def test_quantile_grid(self, m):
        x = frechet_quantile((np.arange(1, m + 1) - 0.5) / m, 2.0)
        assert ks_distance(x, lambda z: frechet_cdf(z, 2.0)) == pytest.approx(0.5 / m)

    def test_single_point_at_median(self):
        med = frechet_quantile(0.5, 2.0)
        assert ks_distance([med], lambda z: frechet_cdf(z, 2.0)) == pytest.approx(0.5)

    def test_frechet_samples(self):
        rng = np.random.default_rng(3)
        ok = 0
        for _ in range(200):
            x = frechet_quantile(1.0 - rng.random(10**4), 2.0)
            ok += ks_distance(x, lambda z: frechet_cdf(z, 2.0)) < 0.02
        assert ok >= 0.99 * 200

    @settings(deadline=None)
    @given(st.lists(st.floats(0.01, 100), min_size=1, max_size=50))
    def test_bounds(self, vals):
        d = ks_distance(vals, lambda z: frechet_cdf(z, 1.5))
        assert 0.5 / len(vals) - 1e-12 <= d <= 1.0


class TestTailSlope:
    def test_exact_grid(self):
        # with one value per order statistic S(v_(i)) = i/N exactly
        x = pareto_grid(2.0, 10**5)
        u = np.arange(1, x.size + 1) / x.size
        exact = u ** (-1 / 2.0)
        assert tail_slope(exact, 0.01) == pytest.approx(-2.0, abs=1e-6)
        assert tail_slope(x, 0.01) == pytest.approx(-2.0, abs=0.05)

    def test_constant_sample(self):
        with pytest.raises(InsufficientDataError):
            tail_slope(np.full(1000, 3.0), 0.5)

    def test_estimator(self):
        rng = np.random.default_rng(7)
        x = WeightDistribution.pareto(2.5).sample(rng, 10**5)
        est = TailSlopeEstimator(0.01).fit(x)
        assert est.tail_index_ == pytest.approx(2.5, abs=0.3)
