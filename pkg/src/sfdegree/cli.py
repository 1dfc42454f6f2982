"""Command-line interface.

Config files use ``key = value`` lines under ``[model]`` and
``[experiment]`` headers (lines before any header belong to ``[model]``)::

    [model]
    model = IV
    weight = pareto(beta=2.5)
    n = 10000

    [experiment]
    kind = max-degree
    replications = 500
    n_sweep = 1000, 10000, 100000

Overrides are given as ``--set key=value`` (or ``section.key=value``).
Exit codes: 0 success, 1 configuration error, 2 runtime error, 3 failed
``--assert``.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import re
import secrets
import sys
from dataclasses import replace

import numpy as np

from . import experiments as ex
from .estimators import InsufficientDataError, hill, intermediate_sequence
from .models import DEFAULT_MAX_VERTICES, ConfigError, ModelConfig, generate, scaling_constants, validate, write_edge_list
from .weights import parse_weight

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_ASSERT = 0, 1, 2, 3

MODEL_KEYS = ("model", "weight", "n", "d", "alpha", "lambda", "buffer", "mode", "max_vertices")
EXPERIMENT_KEYS = (
    "kind", "replications", "seed", "n_sweep", "theta", "depth", "intervals",
    "thresholds", "fraction", "with_k", "iid", "bias_action", "bias_target",
)
SECTIONS = {"model": MODEL_KEYS, "experiment": EXPERIMENT_KEYS}

_HEADER = re.compile(r"^\s*\[([^\]]+)\]\s*$")
_ENTRY = re.compile(r"^\s*([A-Za-z_][\w.]*)\s*[=:]")


class CliConfigError(ConfigError):
    def __init__(self, message, key=None, line=None):
        where = ""
        if key is not None:
            where = f"key {key!r}"
            if line is not None:
                where += f" (line {line})"
            where += ": "
        super().__init__(where + message)
        self.key = key
        self.line = line


def _line_numbers(text):
    """Map (section, key) to the line where it is set."""
    out = {}
    section = "model"
    for i, raw in enumerate(text.splitlines(), start=1):
        m = _HEADER.match(raw)
        if m:
            section = m.group(1).strip().lower()
            continue
        m = _ENTRY.match(raw)
        if m and not raw.lstrip().startswith(("#", ";")):
            out[(section, m.group(1).lower())] = i
    return out


def _read_sections(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    lines = _line_numbers(text)
    parser = configparser.ConfigParser(interpolation=None, strict=True)
    parser.optionxform = str.lower
    try:
        parser.read_string("[model]\n" + text if not text.lstrip().startswith("[") else text)
    except configparser.Error as exc:
        raise CliConfigError(f"malformed config: {exc}") from None
    raw = {}
    for section in parser.sections():
        name = section.strip().lower()
        if name not in SECTIONS:
            raise CliConfigError(f"unknown section [{section}]")
        for key, value in parser.items(section):
            if key not in SECTIONS[name]:
                raise CliConfigError("unknown key", key, lines.get((name, key)))
            raw[(name, key)] = value.strip()
    return raw, lines


def _apply_overrides(raw, overrides):
    for item in overrides or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise CliConfigError(f"override {item!r} is not key=value")
        key = key.strip().lower()
        if "." in key:
            section, key = key.split(".", 1)
            if section not in SECTIONS or key not in SECTIONS[section]:
                raise CliConfigError("unknown override key", f"{section}.{key}")
        else:
            owners = [s for s, keys in SECTIONS.items() if key in keys]
            if not owners:
                raise CliConfigError("unknown override key", key)
            section = owners[0]
        raw[(section, key)] = value.strip()
    return raw


def _convert(raw, lines, section, key, fn, default=None):
    if (section, key) not in raw:
        return default
    value = raw[(section, key)]
    try:
        return fn(value)
    except (ValueError, TypeError) as exc:
        raise CliConfigError(f"bad value {value!r} ({exc})", key, lines.get((section, key))) from None


def _bool(v):
    s = v.strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _int(v):
    f = float(v)
    if not f.is_integer():
        raise ValueError("expected an integer")
    return int(f)


def _int_list(v):
    return tuple(_int(x) for x in v.replace(";", ",").split(",") if x.strip())


def _float_list(v):
    return tuple(float(x) for x in v.replace(";", ",").split(",") if x.strip())


def _intervals(v):
    out = []
    for part in v.replace(";", ",").split(","):
        if not part.strip():
            continue
        a, sep, b = part.partition(":")
        if not sep:
            raise ValueError("intervals are written a:b, e.g. 1:inf")
        out.append((float(a), float(b)))
    return tuple(out)


def _optional_float(v):
    return None if v.strip().lower() in ("", "none", "default") else float(v)


def parse_config(path, overrides=(), seed=None):
    """Read a config file and return ``(model, experiment, effective, seed)``.

    ``experiment`` is None when the file has no ``[experiment]`` section.
    ``effective`` maps section names to every key with its resolved value,
    defaults included. The seed is ``seed`` if given, else the configured
    one, else fresh entropy (printed to stderr so the run can be repeated).
    """
    raw, lines = _read_sections(path)
    raw = _apply_overrides(raw, overrides)
    if seed is None:
        seed = _convert(raw, lines, "experiment", "seed", _int)
    if seed is None:
        seed = secrets.randbits(64)
        print(f"seed: {seed}", file=sys.stderr)
    if not 0 <= seed < 2**64:
        raise CliConfigError("seed must lie in [0, 2**64)", "seed")
    for key in ("model", "weight", "n"):
        if ("model", key) not in raw:
            raise CliConfigError("required key missing", key)
    try:
        weight = parse_weight(raw[("model", "weight")])
    except ValueError as exc:
        raise CliConfigError(str(exc), "weight", lines.get(("model", "weight"))) from None
    kwargs = dict(
        kind=raw[("model", "model")],
        weight=weight,
        n=_convert(raw, lines, "model", "n", _int),
        d=_convert(raw, lines, "model", "d", _int, 1),
        alpha=_convert(raw, lines, "model", "alpha", float, 2.0),
        lam=_convert(raw, lines, "model", "lambda", float, 1.0),
        buffer=_convert(raw, lines, "model", "buffer", _optional_float, None),
        mode=raw.get(("model", "mode"), "fast"),
        max_vertices=_convert(raw, lines, "model", "max_vertices", _int, DEFAULT_MAX_VERTICES),
    )
    try:
        model = ModelConfig(**kwargs)
    except ConfigError as exc:
        raise CliConfigError(str(exc)) from None
    report = validate(model)
    bad = report.violations()
    if bad:
        c = bad[0]
        keys = {"β < d": "weight", "weight = invuniform": "weight"}
        key = keys.get(c.name, "d")
        raise CliConfigError(f"{c.name} violated ({c.detail})", key, lines.get(("model", key)))
    for c in report.constraints:
        if c.status == "outside-proven-regime":
            print(f"warning: {c.name} does not hold ({c.detail}); outside the proven regime", file=sys.stderr)
    experiment = None
    if any(s == "experiment" for s, _ in raw):
        ekw = {}
        conv = {
            "replications": _int, "seed": _int, "n_sweep": _int_list, "theta": float, "depth": _int,
            "intervals": _intervals, "thresholds": _float_list, "fraction": float, "with_k": _bool,
            "iid": _bool, "bias_action": str, "bias_target": float, "kind": str,
        }
        for key, fn in conv.items():
            val = _convert(raw, lines, "experiment", key, fn)
            if val is not None:
                ekw[key] = val
        ekw.setdefault("kind", "max-degree")
        ekw.setdefault("replications", 1)
        ekw["seed"] = seed
        try:
            experiment = ex.ExperimentConfig(model=model, **ekw)
        except ValueError as exc:
            raise CliConfigError(str(exc)) from None
    effective = {"model": model.to_dict()}
    if experiment is not None:
        eff = experiment.to_dict()
        eff.pop("model")
        effective["experiment"] = eff
    return model, experiment, effective, seed


def dump_effective(effective) -> str:
    out = []
    for section, values in effective.items():
        out.append(f"[{section}]")
        for key, value in values.items():
            if key == "model" and section == "experiment":
                continue
            if isinstance(value, list):
                if value and isinstance(value[0], list):
                    value = ", ".join(f"{a}:{b}" for a, b in value)
                else:
                    value = ", ".join(str(v) for v in value)
            out.append(f"{key} = {'none' if value is None else value}")
        out.append("")
    return "\n".join(out)


def _sample_json(sample):
    sc = sample.scaling
    return {
        "config": sample.config.to_dict(),
        "seed": sample.seed,
        "window_size": sample.size,
        "simulated_vertices": sample.simulated,
        "constants": {"p": sc.p, "gamma": sc.gamma, "xi": sc.xi, "q_n": sc.q_n, "v_d": sc.v_d},
    }


def _degree_csv(sample):
    lines = []
    pos = sample.positions
    if pos.ndim == 1:
        lines.append("id,weight,degree")
        for i, w, d in zip(pos, sample.weights, sample.degrees):
            lines.append(f"{int(i)},{float(w)!r},{int(d)}")
    else:
        cols = ",".join(f"x{j + 1}" for j in range(pos.shape[1]))
        lines.append(f"{cols},weight,degree")
        for row, w, d in zip(pos, sample.weights, sample.degrees):
            coord = ",".join(str(int(v)) if float(v).is_integer() else repr(float(v)) for v in row)
            lines.append(f"{coord},{float(w)!r},{int(d)}")
    return "\n".join(lines) + "\n"


def cmd_generate(args, model, experiment):
    seed = args.seed
    sample = generate(model, seed, record_edges=args.edges)
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, f"sample_model{model.kind}_n{model.n}_seed{seed}")
    with open(base + ".csv", "w", encoding="utf-8") as fh:
        fh.write(_degree_csv(sample))
    with open(base + ".json", "w", encoding="utf-8") as fh:
        fh.write(json.dumps(_sample_json(sample), indent=2) + "\n")
    written = [base + ".csv", base + ".json"]
    if args.edges:
        write_edge_list(sample, base + ".edges")
        written.append(base + ".edges")
    for path in written:
        print(path)
    return EXIT_OK


def cmd_degrees(args, model, experiment):
    seed = args.seed
    sample = generate(model, seed)
    sys.stdout.write(_degree_csv(sample))
    return EXIT_OK


def cmd_hill(args, model, experiment):
    seed = args.seed
    sample = generate(model, seed)
    k = args.k if args.k is not None else intermediate_sequence(sample.size, args.theta)
    try:
        h = hill(sample.degrees, k)
    except InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    gamma = scaling_constants(model).gamma
    out = {"seed": seed, "k": k, "hill": h, "tail_index": (1.0 / h) if h > 0 else math.inf,
           "stderr": h / math.sqrt(k), "target": 1.0 / gamma}
    print(json.dumps(out))
    return EXIT_OK


def cmd_experiment(args, model, experiment):
    if experiment is None:
        experiment = ex.ExperimentConfig(model=model, kind=args.kind or "max-degree", replications=1, seed=args.seed)
    if args.kind:
        experiment = replace(experiment, kind=args.kind)
    if args.bias_action:
        experiment = replace(experiment, bias_action=args.bias_action)
    report = ex.run_experiment(experiment, workers=args.workers)
    ex.assess(report)
    csv_path, json_path = ex.write_report(report, args.out)
    print(csv_path)
    print(json_path)
    for c in report.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}", file=sys.stderr)
    if args.assert_ and not report.passed:
        return EXIT_ASSERT
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="sfdegree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="config file path")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
        p.add_argument("--seed", type=lambda s: int(s, 0), default=None, help="master seed (64-bit)")
        p.add_argument("--dump-config", action="store_true", help="print the effective config")

    p = sub.add_parser("generate", help="simulate one graph and write degrees (and edges)")
    common(p)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--edges", action="store_true", help="also write the edge list")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("degrees", help="print the window degree sequence as CSV")
    common(p)
    p.set_defaults(func=cmd_degrees)

    p = sub.add_parser("hill", help="Hill estimate on one simulated degree sequence")
    common(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--theta", type=float, default=0.5)
    p.set_defaults(func=cmd_hill)

    p = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    common(p)
    p.add_argument("--kind", choices=ex.KINDS, default=None)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--assert", dest="assert_", action="store_true", help="exit 3 if a check fails")
    p.add_argument("--bias-action", choices=("refuse", "warn", "expand"), default=None)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        model, experiment, effective, args.seed = parse_config(args.config, args.overrides, args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if getattr(args, "workers", 1) < 1:
        print("config error: --workers must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    if args.dump_config:
        sys.stdout.write(dump_effective(effective))
    try:
        return args.func(args, model, experiment)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - every other failure is a runtime error
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
