"""Tests for the weight laws."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfdegree.weights import WeightDistribution, parse_weight

betas = st.floats(min_value=0.3, max_value=6.0)


class TestSurvival:
    def test_pareto_value(self):
        assert WeightDistribution.pareto(2).survival(10.0) == pytest.approx(0.01)

    @pytest.mark.parametrize(
        "dist",
        [WeightDistribution.pareto(2), WeightDistribution.paretolog(2, -1), WeightDistribution.invuniform(3)],
    )
    def test_below_endpoint_is_one(self, dist):
        assert dist.survival(0.0) == 1.0
        assert dist.survival(dist.xmin) == 1.0

    def test_paretolog_at_e(self):
        # e^-2 * (1 + 1)^-1
        assert WeightDistribution.paretolog(2, -1).survival(math.e) == pytest.approx(math.exp(-2) / 2, rel=1e-12)
        assert math.exp(-2) / 2 == pytest.approx(0.067668, abs=1e-6)

    @given(betas, st.floats(min_value=1.0, max_value=1e6))
    def test_invuniform_matches_pareto(self, beta, w):
        assert WeightDistribution.invuniform(beta).survival(w) == WeightDistribution.pareto(beta).survival(w)

    @given(betas, st.floats(-3.0, 0.0), st.lists(st.floats(0.0, 1e8), min_size=2, max_size=20))
    def test_nonincreasing(self, beta, kappa, ws):
        dist = WeightDistribution.paretolog(beta, kappa)
        ws = np.sort(np.array(ws))
        s = dist.survival(ws)
        assert np.all(np.diff(s) <= 1e-15)
        assert np.all((s >= 0) & (s <= 1))

    def test_regular_variation(self):
        dist = WeightDistribution.paretolog(2.0, -1.0)
        # the log factor converges slowly, so go far out
        w = 1e100
        for a in (0.5, 2.0, 10.0):
            assert dist.survival(a * w) / dist.survival(w) == pytest.approx(a**-2.0, rel=0.02)

    def test_vanishes_at_infinity(self):
        assert WeightDistribution.pareto(1.5).survival(1e30) < 1e-40


class TestSampling:
    def test_inverse_cdf_values(self):
        assert WeightDistribution.pareto(2).inverse_survival(0.01) == pytest.approx(10.0)
        assert WeightDistribution.invuniform(3).inverse_survival(0.001) == pytest.approx(10.0)

    @given(betas, st.floats(-3.0, 0.0), st.floats(1e-12, 1.0))
    def test_inverse_roundtrip(self, beta, kappa, u):
        dist = WeightDistribution.paretolog(beta, kappa)
        w = dist.inverse_survival(u)
        assert w >= 1.0
        if w > 1.0:
            assert dist.survival(w) == pytest.approx(u, rel=1e-9)

    def test_paretolog_monte_carlo(self):
        dist = WeightDistribution.paretolog(2, -1)
        rng = np.random.default_rng(11)
        w = dist.sample(rng, 10**6)
        p = math.exp(-2) / 2
        se = math.sqrt(p * (1 - p) / w.size)
        assert abs(np.mean(w > math.e) - p) < 3 * se

    def test_samples_above_endpoint(self):
        rng = np.random.default_rng(0)
        w = WeightDistribution.pareto(1.2, xmin=3.0).sample(rng, 1000)
        assert w.min() >= 3.0

    def test_sample_tail(self):
        rng = np.random.default_rng(1)
        w = WeightDistribution.pareto(2).sample_tail(50.0, rng, 10000)
        assert w.min() >= 50.0
        # conditional Pareto: P(W > 100 | W > 50) = 1/4
        assert np.mean(w > 100) == pytest.approx(0.25, abs=0.02)


class TestQuantile:
    def test_closed_form_values(self):
        assert WeightDistribution.pareto(2).quantile_q(1, 100) == pytest.approx(10.0)
        assert WeightDistribution.pareto(2).quantile_q(0.5, 16) == pytest.approx(2.0)

    def test_bisection_invuniform(self):
        assert WeightDistribution.invuniform(3).quantile_q(1, 1000, method="bisect") == pytest.approx(10.0, abs=1e-9)

    def test_level_one_is_endpoint(self):
        assert WeightDistribution.pareto(2, xmin=2.0).quantile_q(1, 1) == 2.0

    def test_paretolog_defining_property(self):
        dist = WeightDistribution.paretolog(2, -1)
        t = 1e4
        x = dist.quantile_q(1.0, t)
        assert dist.survival(x) <= 1 / t * (1 + 1e-9)
        assert dist.survival(x * (1 - 1e-6)) > 1 / t

    def test_rejects_bad_level(self):
        with pytest.raises(ValueError):
            WeightDistribution.pareto(2).quantile_q(1, 0.5)
        with pytest.raises(ValueError):
            WeightDistribution.pareto(2).quantile_q(0, 10)


class TestMoment:
    def test_closed_form(self):
        assert WeightDistribution.pareto(2).moment(0.5) == pytest.approx(4 / 3)

    def test_zero_and_divergent(self):
        assert WeightDistribution.paretolog(2, -1).moment(0) == 1.0
        assert math.isinf(WeightDistribution.pareto(2).moment(2))

    def test_monte_carlo(self):
        rng = np.random.default_rng(5)
        w = WeightDistribution.pareto(2).sample(rng, 10**6)
        assert np.mean(w**0.5) == pytest.approx(4 / 3, rel=0.01)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(1.5, 5.0), st.floats(0.05, 0.95))
    def test_quadrature_matches_closed_form(self, beta, frac):
        s = frac * beta
        dist = WeightDistribution.pareto(beta)
        assert dist.moment(s, method="quad") == pytest.approx(beta / (beta - s), rel=1e-6)


class TestParse:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("pareto(beta=2.5)", WeightDistribution.pareto(2.5)),
            ("pareto(beta=2, xmin=3)", WeightDistribution.pareto(2, 3)),
            ("paretolog(beta=2, kappa=-1)", WeightDistribution.paretolog(2, -1)),
            ("invuniform(beta=1)", WeightDistribution.invuniform(1)),
        ],
    )
    def test_parse(self, text, expected):
        assert parse_weight(text) == expected
        assert parse_weight(str(expected)) == expected

    @pytest.mark.parametrize("text", ["gauss(beta=1)", "pareto(beta=-1)", "pareto(2)", "pareto(beta=2, foo=1)", "pareto"])
    def test_parse_errors(self, text):
        with pytest.raises(ValueError):
            parse_weight(text)

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            WeightDistribution.paretolog(2, kappa=0.5)
        with pytest.raises(ValueError):
            WeightDistribution("invuniform", 2.0, xmin=2.0)
