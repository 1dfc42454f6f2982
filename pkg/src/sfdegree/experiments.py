"""Monte Carlo drivers that compare simulated degrees with their limit laws.

Each replication gets its own generator seeded by :func:`split_stream`
from (master seed, n, replication index), so results do not depend on the
number of workers. Reports hold one row per replication (or per
replication and threshold) plus aggregates computed from those rows.
"""

from __future__ import annotations

import csv
import io
import json
import math
import multiprocessing as mp
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from typing import Optional

import numpy as np
from scipy import stats

from .estimators import InsufficientDataError, frechet_cdf, hill, intermediate_sequence, ks_distance, tail_slope
from .models import (
    ModelConfig,
    estimate_truncation_bias,
    gate_weight,
    generate,
    generate_coupled,
    minimal_buffer,
    scaling_constants,
)
from .pointproc import LimitMeasure, rescale, top_vertices

KINDS = (
    "max-degree",
    "poisson-pp",
    "hill-consistency",
    "ordering",
    "coupling",
    "degree-tail",
    "weight-degree-correspondence",
)

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIN_REPS_FOR_CI = 30
Z95 = 1.959963984540054


class GateError(RuntimeError):
    """Truncation bias above the allowed level."""


def _mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


def split_stream(master_seed: int, index: int) -> int:
    """64-bit seed for stream ``index`` under ``master_seed``.

    The splitmix64 finalizer is applied to ``master + GOLDEN * (index + 1)``
    (mod 2**64), then mixed once more with the master seed so that seeds
    from different masters do not share a shifted sequence. For a fixed
    master the map is a bijection of the index, so distinct indices
    (mod 2**64) never collide.
    """
    m = int(master_seed) & MASK64
    i = int(index) & MASK64
    return _mix64((_mix64((m + GOLDEN * (i + 1)) & MASK64) + m) & MASK64)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment. ``n_sweep`` defaults to ``(model.n,)``.

    ``intervals`` apply to poisson-pp, ``thresholds`` to the weight/degree
    correspondence, ``depth`` to ordering and ``theta`` to any k rule.
    ``bias_action`` decides what happens when the truncation bound at the
    99.9% weight exceeds ``bias_target``: "refuse", "warn" or "expand"
    (enlarge the buffer to the smallest that passes).
    """

    model: ModelConfig
    kind: str
    replications: int
    seed: int
    n_sweep: tuple = ()
    theta: float = 0.5
    depth: int = 1
    intervals: tuple = ((1.0, math.inf),)
    thresholds: tuple = (1.0,)
    fraction: float = 0.01
    with_k: bool = False
    iid: bool = False
    bias_action: str = "refuse"
    bias_target: float = 0.05

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        if int(self.replications) < 1:
            raise ValueError("replications must be >= 1")
        sweep = tuple(int(v) for v in self.n_sweep) or (self.model.n,)
        if any(b <= a for a, b in zip(sweep, sweep[1:])):
            raise ValueError("n sweep must be strictly increasing")
        object.__setattr__(self, "n_sweep", sweep)
        object.__setattr__(self, "intervals", tuple((float(a), float(b)) for a, b in self.intervals))
        object.__setattr__(self, "thresholds", tuple(float(a) for a in self.thresholds))
        if self.bias_action not in ("refuse", "warn", "expand"):
            raise ValueError("bias_action must be refuse, warn or expand")
        for a, b in self.intervals:
            if not 0 < a <= b:
                raise ValueError(f"interval ({a}, {b}] needs 0 < a <= b")
        if self.depth < 1:
            raise ValueError("ordering depth must be >= 1")

    def to_dict(self) -> dict:
        out = {"model": self.model.to_dict()}
        for key in (
            "kind", "replications", "seed", "theta", "depth", "fraction",
            "with_k", "iid", "bias_action", "bias_target",
        ):
            out[key] = getattr(self, key)
        out["n_sweep"] = list(self.n_sweep)
        out["intervals"] = [[a, _json_float(b)] for a, b in self.intervals]
        out["thresholds"] = list(self.thresholds)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        kw = {k: v for k, v in data.items() if k != "model"}
        kw["model"] = ModelConfig.from_dict(data["model"])
        kw["n_sweep"] = tuple(kw.get("n_sweep", ()))
        kw["intervals"] = tuple((a, _parse_float(b)) for a, b in kw.get("intervals", ((1.0, "inf"),)))
        kw["thresholds"] = tuple(kw.get("thresholds", (1.0,)))
        return cls(**kw)


def _json_float(x):
    return "inf" if math.isinf(x) else x


def _parse_float(x):
    return float(x)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list
    constants: dict
    aggregates: dict
    extra: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    wall_clock: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


# -- per-n setup ------------------------------------------------------------------


def _model_for(exp: ExperimentConfig, n: int, notes: list) -> ModelConfig:
    model = exp.model.with_n(n)
    if model.kind in ("I", "III"):
        w = gate_weight(model)
        bias = estimate_truncation_bias(model, w)
        if bias > exp.bias_target:
            msg = (
                f"n={n}: expected missed edges {bias:.4g} at weight {w:.4g} exceeds "
                f"{exp.bias_target} with buffer {model.effective_buffer:g}"
            )
            if exp.bias_action == "refuse":
                raise GateError(msg)
            if exp.bias_action == "warn":
                warnings.warn(msg, RuntimeWarning, stacklevel=3)
                notes.append(msg)
            else:
                b = minimal_buffer(model, w, exp.bias_target)
                notes.append(f"{msg}; buffer expanded to {b:g}")
                model = replace(model, buffer=b)
    return model


def _constants(model: ModelConfig) -> dict:
    sc = scaling_constants(model)
    out = {"p": sc.p, "gamma": sc.gamma, "xi": sc.xi, "q_n": sc.q_n, "v_d": sc.v_d}
    if model.kind in ("I", "III"):
        w = gate_weight(model)
        out["buffer"] = model.effective_buffer
        out["truncation_bias"] = estimate_truncation_bias(model, w)
    return out


# -- replication workers ------------------------------------------------------------


def _hill_or_nan(values, k):
    try:
        return hill(values, k)
    except InsufficientDataError:
        return math.nan


def _rep_max_degree(exp, model, seed):
    s = generate(model, seed)
    return {"max_scaled": rescale(s).max(), "max_degree": int(s.degrees.max(initial=0))}, None


def _interval_key(prefix, a, b):
    return f"{prefix}({a:g},{'inf' if math.isinf(b) else format(b, 'g')}]"


def _rep_poisson_pp(exp, model, seed):
    s = generate(model, seed)
    pp = rescale(s)
    row = {_interval_key("count", a, b): pp.count(a, b) for a, b in exp.intervals}
    if exp.with_k:
        k = intermediate_sequence(model.n, exp.theta)
        ppk = rescale(s, k)
        for a, b in exp.intervals:
            row[_interval_key("countk", a, b)] = ppk.count(a, b)
    return row, None


def _rep_hill(exp, model, seed):
    k = intermediate_sequence(model.n, exp.theta)
    if exp.iid:
        rng = np.random.default_rng(seed)
        p = scaling_constants(model).p
        data = model.weight.sample(rng, model.n) ** p
    else:
        data = generate(model, seed).degrees
    return {"k": k, "hill": _hill_or_nan(data, k)}, None


def _rep_ordering(exp, model, seed):
    s = generate(model, seed)
    depth = exp.depth
    if depth > s.size:
        return {"holds": 0, "window": s.size}, None
    by_weight = top_vertices(s.weights, depth)
    by_degree = top_vertices(s.degrees, depth)
    return {"holds": int(np.array_equal(by_weight, by_degree)), "window": s.size}, None


def _rep_coupling(exp, model, seed):
    t = generate_coupled(model.n, model.weight, seed)
    k = intermediate_sequence(model.n, exp.theta)
    h = [_hill_or_nan(d, k) for d in (t.deg1, t.deg2, t.deg3)]
    return {
        "event_a": int(t.event_a),
        "g1_differs": int(t.g1_differs),
        "discrepancy": t.discrepancy,
        "k": k,
        "hill1": h[0],
        "hill2": h[1],
        "hill3": h[2],
        "abs_h23": abs(h[1] - h[2]),
    }, None


def _rep_degree_tail(exp, model, seed):
    s = generate(model, seed)
    return {"mean_degree": float(s.degrees.mean()), "max_degree": int(s.degrees.max(initial=0))}, np.bincount(
        s.degrees
    )


def _rep_correspondence(exp, model, seed):
    s = generate(model, seed)
    sc = s.scaling
    wp = sc.xi * s.weights**sc.p
    deg = s.degrees
    rows = []
    for a in exp.thresholds:
        level = sc.xi * sc.q_n * a
        rows.append(
            {
                "a": a,
                "degree_big_weight_small": int(np.sum((deg >= level) & (level >= wp))),
                "weight_big_degree_small": int(np.sum((wp >= level) & (level >= deg))),
            }
        )
    return rows, None


_WORKERS = {
    "max-degree": _rep_max_degree,
    "poisson-pp": _rep_poisson_pp,
    "hill-consistency": _rep_hill,
    "ordering": _rep_ordering,
    "coupling": _rep_coupling,
    "degree-tail": _rep_degree_tail,
    "weight-degree-correspondence": _rep_correspondence,
}


def _run_task(task):
    exp, model, rep = task
    seed = split_stream(split_stream(exp.seed, model.n), rep)
    out, extra = _WORKERS[exp.kind](exp, model, seed)
    head = {"n": model.n, "rep": rep, "seed": seed}
    rows = [dict(head, **r) for r in out] if isinstance(out, list) else [dict(head, **out)]
    return rows, extra


# -- aggregation -------------------------------------------------------------------


def _summary(values):
    x = np.asarray(values, dtype=float)
    x = x[~np.isnan(x)]
    r = x.size
    mean = float(x.mean()) if r else math.nan
    var = float(x.var(ddof=1)) if r > 1 else math.nan
    se = math.sqrt(var / r) if r > 1 else math.nan
    return {"count": r, "mean": mean, "var": var, "se": se, "half_width": Z95 * se if r > 1 else math.nan}


def aggregate(exp: ExperimentConfig, rows: list, constants: dict, extra: Optional[dict] = None) -> dict:
    """Aggregates per n, computed only from ``rows`` and the per-n constants.

    The degree-tail slope also needs the pooled degree histogram in ``extra``.
    """
    out = {}
    for n in exp.n_sweep:
        rn = [r for r in rows if r["n"] == n]
        c = constants[str(n)]
        gamma = c["gamma"]
        agg = {"replications": len({r["rep"] for r in rn})}
        if exp.kind == "max-degree":
            vals = np.array([r["max_scaled"] for r in rn])
            agg["ks"] = ks_distance(vals, lambda z: frechet_cdf(z, gamma))
            agg["max_scaled"] = _summary(vals)
        elif exp.kind == "poisson-pp":
            nu = LimitMeasure(gamma)
            for prefix in ("count", "countk") if exp.with_k else ("count",):
                for a, b in exp.intervals:
                    key = _interval_key(prefix, a, b)
                    s = _summary([r[key] for r in rn])
                    s["limit"] = nu(a, b)
                    s["var_over_mean"] = s["var"] / s["mean"] if s["mean"] > 0 else math.nan
                    s["sd"] = math.sqrt(s["var"]) if s["count"] > 1 else math.nan
                    agg[key] = s
            pairs = {}
            iv = exp.intervals
            for i in range(len(iv)):
                for j in range(i + 1, len(iv)):
                    (a1, b1), (a2, b2) = iv[i], iv[j]
                    if b1 <= a2 or b2 <= a1:
                        x = np.array([r[_interval_key("count", a1, b1)] for r in rn])
                        y = np.array([r[_interval_key("count", a2, b2)] for r in rn])
                        prod = (x - x.mean()) * (y - y.mean())
                        m = x.size
                        cov = float(prod.sum() / (m - 1)) if m > 1 else math.nan
                        se = float(prod.std(ddof=1) / math.sqrt(m)) if m > 1 else math.nan
                        name = f"{_interval_key('', a1, b1)}~{_interval_key('', a2, b2)}"
                        pairs[name] = {"cov": cov, "se": se}
            agg["covariance"] = pairs
        elif exp.kind == "hill-consistency":
            h = np.array([r["hill"] for r in rn], dtype=float)
            s = _summary(h)
            s["sd"] = math.sqrt(s["var"]) if s["count"] > 1 else math.nan
            s["target"] = 1.0 / gamma
            s["abs_error"] = abs(s["mean"] - 1.0 / gamma)
            s["excluded"] = int(np.isnan(h).sum())
            agg["hill"] = s
        elif exp.kind == "ordering":
            agg["holds"] = _summary([r["holds"] for r in rn])
        elif exp.kind == "coupling":
            for key in ("g1_differs", "event_a", "discrepancy", "abs_h23"):
                agg[key] = _summary([r[key] for r in rn])
            agg["abs_h23"]["excluded"] = int(sum(math.isnan(r["abs_h23"]) for r in rn))
        elif exp.kind == "degree-tail":
            hist = np.asarray((extra or {}).get(str(n), []), dtype=np.int64)
            agg["mean_degree"] = _summary([r["mean_degree"] for r in rn])
            try:
                slope = tail_slope(np.repeat(np.arange(hist.size), hist), exp.fraction)
            except (InsufficientDataError, ValueError):
                slope = math.nan
            agg["slope"] = slope
            agg["abs_slope_error"] = abs(slope + gamma)
        elif exp.kind == "weight-degree-correspondence":
            for a in exp.thresholds:
                ra = [r for r in rn if r["a"] == a]
                agg[f"a={a:g}"] = {
                    "degree_big_weight_small": _summary([r["degree_big_weight_small"] for r in ra]),
                    "weight_big_degree_small": _summary([r["weight_big_degree_small"] for r in ra]),
                }
        out[str(n)] = agg
    return out


# -- driver --------------------------------------------------------------------------


def run_experiment(exp: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Run every (n, replication) task and aggregate; rows are ordered by (n, rep)."""
    t0 = time.perf_counter()
    notes: list = []
    models = [_model_for(exp, n, notes) for n in exp.n_sweep]
    constants = {str(m.n): _constants(m) for m in models}
    tasks = [(exp, m, rep) for m in models for rep in range(exp.replications)]
    workers = max(1, int(workers))
    if workers == 1 or len(tasks) == 1:
        results = [_run_task(t) for t in tasks]
    else:
        ctx = mp.get_context("fork")
        chunk = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=chunk))
    rows = [r for rs, _ in results for r in rs]
    extra = {}
    if exp.kind == "degree-tail":
        for (e, m, _), (_, hist) in zip(tasks, results):
            key = str(m.n)
            prev = np.asarray(extra.get(key, []), dtype=np.int64)
            size = max(prev.size, hist.size)
            tot = np.zeros(size, np.int64)
            tot[: prev.size] += prev
            tot[: hist.size] += hist
            extra[key] = tot.tolist()
    aggregates = aggregate(exp, rows, constants, extra)
    report = ExperimentReport(exp, rows, constants, aggregates, extra, notes=notes)
    report.wall_clock = time.perf_counter() - t0
    return report


def run_max_degree(exp, workers=1):
    return run_experiment(replace(exp, kind="max-degree"), workers)


def run_poisson_pp(exp, workers=1):
    return run_experiment(replace(exp, kind="poisson-pp"), workers)


def run_hill_consistency(exp, workers=1):
    return run_experiment(replace(exp, kind="hill-consistency"), workers)


def run_ordering(exp, workers=1):
    return run_experiment(replace(exp, kind="ordering"), workers)


def run_coupling(exp, workers=1):
    return run_experiment(replace(exp, kind="coupling"), workers)


def run_degree_tail(exp, workers=1):
    return run_experiment(replace(exp, kind="degree-tail"), workers)


def run_weight_degree_correspondence(exp, workers=1):
    return run_experiment(replace(exp, kind="weight-degree-correspondence"), workers)


# -- pass/fail assessment ------------------------------------------------------------


def load_calibration() -> dict:
    text = resources.files("sfdegree").joinpath("calibration.json").read_text(encoding="utf-8")
    return json.loads(text)


def _nonincreasing(values, slack):
    return all(b <= a + s for a, b, s in zip(values, values[1:], slack))


def assess(report: ExperimentReport, calibration: Optional[dict] = None) -> list:
    """Evaluate the calibrated pass/fail rules for the report's kind."""
    cal = (calibration or load_calibration())["experiments"][report.config.kind]
    exp, agg = report.config, report.aggregates
    ns = [str(n) for n in exp.n_sweep]
    last = agg[ns[-1]]
    reps = exp.replications
    checks = []

    def add(name, ok, detail):
        checks.append(Check(name, bool(ok), detail))

    def need_ci():
        if reps < MIN_REPS_FOR_CI:
            add("replications", False, f"R={reps} < {MIN_REPS_FOR_CI} needed for interval-based checks")
            return False
        return True

    kind = exp.kind
    if kind == "max-degree":
        ks = [agg[n]["ks"] for n in ns]
        slack = cal["ks_slack_sd"] * math.sqrt(2.0) * 0.26 / math.sqrt(reps)
        add("ks nonincreasing", _nonincreasing(ks, [slack] * len(ks)), f"ks={ks}, slack={slack:.4f}")
        add("ks final", ks[-1] < cal["ks_max"], f"ks={ks[-1]:.4f} < {cal['ks_max']}")
    elif kind == "poisson-pp":
        if need_ci():
            for a, b in exp.intervals:
                s = last[_interval_key("count", a, b)]
                lo, hi = cal["mean_ratio"]
                ratio = s["mean"] / s["limit"]
                add(f"mean {_interval_key('', a, b)}", lo <= ratio <= hi, f"mean/limit={ratio:.4f}")
                vlo, vhi = cal["var_over_mean"]
                add(
                    f"var/mean {_interval_key('', a, b)}",
                    vlo <= s["var_over_mean"] <= vhi,
                    f"var/mean={s['var_over_mean']:.4f}",
                )
                if exp.with_k:
                    sk = last[_interval_key("countk", a, b)]
                    rk = sk["mean"] / sk["limit"]
                    add(
                        f"D_k mean {_interval_key('', a, b)}",
                        cal["k_mean_ratio"][0] <= rk <= cal["k_mean_ratio"][1] and sk["sd"] < cal["k_sd_max"],
                        f"mean/limit={rk:.4f}, sd={sk['sd']:.4f}",
                    )
            for name, cv in last["covariance"].items():
                z = cal["cov_se"]
                add(f"cov {name}", abs(cv["cov"]) <= z * cv["se"], f"cov={cv['cov']:.4g}, se={cv['se']:.4g}")
    elif kind == "hill-consistency":
        if need_ci():
            h = [agg[n]["hill"] for n in ns]
            err = [x["abs_error"] for x in h]
            slack = [cal["trend_se"] * math.hypot(a["se"], b["se"]) for a, b in zip(h, h[1:])]
            add("error nonincreasing", _nonincreasing(err, slack), f"|mean-1/gamma|={err}")
            add("error final", err[-1] <= cal["abs_error_max"], f"{err[-1]:.4f} <= {cal['abs_error_max']}")
    elif kind == "ordering":
        if need_ci():
            f = [agg[n]["holds"] for n in ns]
            means = [-x["mean"] for x in f]
            slack = [cal["trend_se"] * math.hypot(a["se"], b["se"]) for a, b in zip(f, f[1:])]
            add("frequency nondecreasing", _nonincreasing(means, slack), f"freq={[-m for m in means]}")
            add("frequency final", f[-1]["mean"] >= cal["floor"], f"{f[-1]['mean']:.4f} >= {cal['floor']}")
    elif kind == "coupling":
        if need_ci():
            g = last["g1_differs"]["mean"]
            add("G1 != G3 final", g <= cal["g1_differs_max"], f"{g:.4f} <= {cal['g1_differs_max']}")
            nvals = [r["n"] for r in report.rows]
            dvals = [r["discrepancy"] for r in report.rows]
            if len(ns) > 1:
                tau, pval = stats.kendalltau(nvals, dvals, alternative="greater")
                ok = not (pval < cal["trend_level"])
                add("D_E no increasing trend", ok, f"kendall tau={tau:.4f}, one-sided p={pval:.4g}")
            h = last["abs_h23"]["mean"]
            add("|H2-H3| final", h <= cal["abs_h23_max"], f"{h:.4f} <= {cal['abs_h23_max']}")
    elif kind == "degree-tail":
        e = last["abs_slope_error"]
        add("slope", e <= cal["slope_tol"], f"slope={last['slope']:.4f}, |slope+gamma|={e:.4f}")
    elif kind == "weight-degree-correspondence":
        if need_ci():
            for a in exp.thresholds:
                for key in ("degree_big_weight_small", "weight_big_degree_small"):
                    s = [agg[n][f"a={a:g}"][key] for n in ns]
                    means = [x["mean"] for x in s]
                    slack = [cal["trend_se"] * math.hypot(p["se"], q["se"]) for p, q in zip(s, s[1:])]
                    slack = [0.0 if math.isnan(v) else v for v in slack]
                    add(f"{key} a={a:g} nonincreasing", _nonincreasing(means, slack), f"means={means}")
                    add(f"{key} a={a:g} final", means[-1] <= cal["mismatch_max"], f"{means[-1]:.4f}")
    report.checks = checks
    return checks


# -- serialization -----------------------------------------------------------------------


def report_basename(exp: ExperimentConfig) -> str:
    ns = "-".join(str(n) for n in exp.n_sweep)
    return f"{exp.kind}_model{exp.model.kind}_n{ns}_seed{exp.seed}"


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def rows_to_csv(rows: list) -> str:
    if not rows:
        return ""
    keys = list(rows[0])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in rows:
        w.writerow([_fmt(r.get(k, "")) for k in keys])
    return buf.getvalue()


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    return obj


def report_to_json(report: ExperimentReport) -> str:
    """Config echo, constants, aggregates, checks and notes; no timing so reruns match."""
    data = {
        "schema": 1,
        "config": report.config.to_dict(),
        "constants": report.constants,
        "aggregates": report.aggregates,
        "checks": [asdict(c) for c in report.checks],
        "notes": report.notes,
        "calibration": "sfdegree/calibration.json",
    }
    if report.extra:
        data["pooled_degree_histogram"] = report.extra
    return json.dumps(_clean(data), indent=2, sort_keys=False) + "\n"


def write_report(report: ExperimentReport, outdir) -> tuple:
    os.makedirs(outdir, exist_ok=True)
    base = os.path.join(outdir, report_basename(report.config))
    csv_path, json_path = base + ".csv", base + ".json"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(report.rows))
    with open(json_path, "w", encoding="utf-8") as fh:
        fh.write(report_to_json(report))
    return csv_path, json_path


def config_from_report(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return ExperimentConfig.from_dict(json.load(fh)["config"])
