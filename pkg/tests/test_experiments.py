"""Tests for the replication harness, aggregation and report files."""

import json
import math

import numpy as np
import pytest

from sfdegree import experiments as ex
from sfdegree.estimators import frechet_cdf
from sfdegree.models import ModelConfig
from sfdegree.weights import WeightDistribution

IV = ModelConfig("IV", WeightDistribution.pareto(2), 500)


def small(kind, model=IV, **kw):
    kw.setdefault("replications", 6)
    kw.setdefault("seed", 123)
    return ex.ExperimentConfig(model=model, kind=kind, **kw)


class TestSplitStream:
    def test_deterministic(self):
        assert ex.split_stream(1, 2) == ex.split_stream(1, 2)
        assert ex.split_stream(1, 2) != ex.split_stream(2, 1)

    def test_no_collisions(self):
        seeds = {ex.split_stream(2024, i) for i in range(10**6 + 1)}
        assert len(seeds) == 10**6 + 1

    def test_avalanche(self):
        rng = np.random.default_rng(0)
        flips = []
        for _ in range(10**4):
            m = int(rng.integers(0, 2**63))
            i = int(rng.integers(0, 2**63))
            bit = 1 << int(rng.integers(0, 64))
            flips.append(bin(ex.split_stream(m, i) ^ ex.split_stream(m, i ^ bit)).count("1"))
        assert np.mean(flips) == pytest.approx(32, abs=0.5)

    def test_range(self):
        assert 0 <= ex.split_stream(2**64 - 1, 2**64 - 1) < 2**64


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            small("nope")
        with pytest.raises(ValueError):
            small("max-degree", replications=0)
        with pytest.raises(ValueError):
            small("max-degree", n_sweep=(100, 100))
        with pytest.raises(ValueError):
            small("poisson-pp", intervals=((0.0, 1.0),))

    def test_default_sweep(self):
        assert small("max-degree").n_sweep == (500,)

    def test_roundtrip(self):
        e = small("poisson-pp", n_sweep=(100, 200), intervals=((1, 2), (2, math.inf)), with_k=True)
        assert ex.ExperimentConfig.from_dict(json.loads(json.dumps(e.to_dict()))) == e


class TestRuns:
    def test_single_replication_ks(self):
        r = ex.run_max_degree(small("max-degree", replications=1))
        assert len(r.rows) == 1
        v = r.rows[0]["max_scaled"]
        f = frechet_cdf(v, 2.0)
        assert r.aggregates["500"]["ks"] == pytest.approx(max(f, 1 - f))

    def test_rows_ordered_and_seeded(self):
        r = ex.run_experiment(small("max-degree", n_sweep=(100, 200)))
        assert [(row["n"], row["rep"]) for row in r.rows] == [(n, i) for n in (100, 200) for i in range(6)]
        assert r.rows[0]["seed"] == ex.split_stream(ex.split_stream(123, 100), 0)

    @pytest.mark.parametrize("kind", ex.KINDS)
    def test_workers_do_not_matter(self, kind):
        model = IV if kind != "coupling" else ModelConfig("V", WeightDistribution.pareto(3), 300)
        e = small(kind, model=model, n_sweep=(200, 400), intervals=((1, 2), (2, math.inf)))
        a = ex.run_experiment(e, workers=1)
        b = ex.run_experiment(e, workers=3)
        assert ex.rows_to_csv(a.rows) == ex.rows_to_csv(b.rows)
        assert ex.report_to_json(a) == ex.report_to_json(b)

    @pytest.mark.parametrize("kind", ex.KINDS)
    def test_aggregates_recomputable(self, kind):
        model = IV if kind != "coupling" else ModelConfig("V", WeightDistribution.pareto(3), 300)
        e = small(kind, model=model, n_sweep=(200, 400), intervals=((1, 2), (2, math.inf)), replications=8)
        r = ex.run_experiment(e)
        again = ex.aggregate(e, [dict(row) for row in r.rows], r.constants, r.extra)
        assert json.dumps(ex._clean(again), sort_keys=True) == json.dumps(ex._clean(r.aggregates), sort_keys=True)
        # spot check a mean against the rows
        if kind == "ordering":
            rows = [row["holds"] for row in r.rows if row["n"] == 400]
            assert r.aggregates["400"]["holds"]["mean"] == pytest.approx(np.mean(rows), abs=1e-12)

    def test_gamma_echo(self):
        m = ModelConfig("I", WeightDistribution.pareto(1), 100, d=1, alpha=2, buffer=200)
        e = small("max-degree", model=m, replications=2, bias_action="warn")
        with pytest.warns(RuntimeWarning):
            r = ex.run_experiment(e)
        assert r.constants["100"]["gamma"] == 2.0
        assert r.notes

    def test_gate_refuses(self):
        m = ModelConfig("I", WeightDistribution.pareto(1), 100, d=1, alpha=2, buffer=10)
        with pytest.raises(ex.GateError):
            ex.run_experiment(small("max-degree", model=m))

    def test_gate_expands(self):
        m = ModelConfig("III", WeightDistribution.pareto(2), 100, d=1, alpha=2, buffer=10)
        r = ex.run_experiment(small("max-degree", model=m, replications=2, bias_action="expand"))
        c = r.constants["100"]
        assert c["truncation_bias"] <= 0.05
        assert c["buffer"] > 10

    def test_iid_hill(self):
        e = small("hill-consistency", model=ModelConfig("IV", WeightDistribution.pareto(3), 10**4), iid=True)
        r = ex.run_experiment(e)
        assert r.aggregates["10000"]["hill"]["abs_error"] < 0.05

    def test_ordering_single_vertex(self):
        r = ex.run_ordering(small("ordering", model=ModelConfig("IV", WeightDistribution.pareto(1.5), 1)))
        assert r.aggregates["1"]["holds"]["mean"] == 1.0

    def test_correspondence_huge_threshold(self):
        r = ex.run_experiment(small("weight-degree-correspondence", thresholds=(1e9,)))
        agg = r.aggregates["500"]["a=1e+09"]
        assert agg["degree_big_weight_small"]["mean"] == 0
        assert agg["weight_big_degree_small"]["mean"] == 0

    def test_level_k_process(self):
        # at theta=0.5 the exact finite-n mean is about 1.16, so the check uses theta=0.4
        model = ModelConfig("IV", WeightDistribution.pareto(2), 10**5)
        e = small("poisson-pp", model=model, replications=30, with_k=True, theta=0.4)
        r = ex.run_experiment(e)
        ex.assess(r)
        dk = [c for c in r.checks if c.name.startswith("D_k")]
        assert dk and all(c.passed for c in dk)

    def test_ordering_depth(self):
        model = ModelConfig("IV", WeightDistribution.pareto(1.5), 2000)
        one = ex.run_ordering(small("ordering", model=model, replications=100, depth=1))
        two = ex.run_ordering(small("ordering", model=model, replications=100, depth=2))
        f1, f2 = one.aggregates["2000"]["holds"], two.aggregates["2000"]["holds"]
        assert f2["mean"] <= f1["mean"] + 2 * math.hypot(f1["se"], f2["se"])

    def test_degree_tail_histogram(self):
        r = ex.run_degree_tail(small("degree-tail", replications=3))
        hist = r.extra["500"]
        assert sum(hist) == 3 * 500


class TestAssess:
    def _report(self, kind, aggregates, reps=50, sweep=(1, 2), rows=()):
        e = small(kind, n_sweep=sweep, replications=reps)
        return ex.ExperimentReport(e, list(rows), {}, aggregates)

    def test_ks_rules(self):
        r = self._report("max-degree", {"1": {"ks": 0.08}, "2": {"ks": 0.05}}, reps=500)
        ex.assess(r)
        assert r.passed
        r = self._report("max-degree", {"1": {"ks": 0.05}, "2": {"ks": 0.2}}, reps=500)
        ex.assess(r)
        assert not r.passed

    def test_needs_thirty_replications(self):
        agg = {"1": {"holds": {"mean": 1.0, "se": 0.0}}, "2": {"holds": {"mean": 1.0, "se": 0.0}}}
        r = self._report("ordering", agg, reps=10)
        ex.assess(r)
        assert not r.passed
        assert r.checks[0].name == "replications"
        ex.assess(r := self._report("ordering", agg, reps=30))
        assert r.passed

    def test_calibration_file(self):
        cal = ex.load_calibration()
        assert set(cal["experiments"]) == set(ex.KINDS)


class TestReportFiles:
    def test_write_and_rerun(self, tmp_path):
        e = small("poisson-pp", intervals=((1, 2), (2, math.inf)))
        r = ex.run_experiment(e)
        ex.assess(r)
        csv_path, json_path = ex.write_report(r, tmp_path)
        assert csv_path.endswith("poisson-pp_modelIV_n500_seed123.csv")
        again = ex.run_experiment(ex.config_from_report(json_path))
        assert ex.rows_to_csv(again.rows) == open(csv_path).read()
        data = json.load(open(json_path))
        assert data["constants"]["500"]["gamma"] == 2.0
        assert "wall_clock" not in data

    def test_csv_format(self):
        text = ex.rows_to_csv([{"n": 1, "x": 0.1, "ok": True}])
        assert text == "n,x,ok\n1,0.1,1\n"
