"""Tests for the command-line interface."""

import json
import os
import subprocess
import sys

import pytest

from sfdegree import cli
from sfdegree.experiments import config_from_report, rows_to_csv, run_experiment
from sfdegree.models import scaling_constants

IV_TEXT = """[model]
model = IV
weight = pareto(beta=2.5)
n = 10000
"""

EXP_TEXT = """[model]
model = IV
weight = pareto(beta=2)
n = 300

[experiment]
kind = max-degree
replications = 40
n_sweep = 100, 300
seed = 99
"""


@pytest.fixture
def write(tmp_path):
    def _write(text, name="c.ini"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    return _write


class TestParseConfig:
    def test_model_iv(self, write):
        model, exp, eff, seed = cli.parse_config(write(IV_TEXT), seed=1)
        assert model.kind == "IV" and model.n == 10000
        assert scaling_constants(model).gamma == 2.5
        assert exp is None
        assert eff["model"]["d"] == 1 and eff["model"]["mode"] == "fast"

    def test_headerless(self, write):
        model, *_ = cli.parse_config(write("model = V\nweight = pareto(beta=3)\nn = 5\n"), seed=1)
        assert model.kind == "V"

    def test_beta_below_d(self, write):
        text = "[model]\nmodel = II\nd = 1\nweight = invuniform(beta=2)\nn = 100\n"
        with pytest.raises(cli.CliConfigError, match="β < d violated") as err:
            cli.parse_config(write(text), seed=1)
        assert err.value.key == "weight" and err.value.line == 4

    def test_unknown_key(self, write):
        with pytest.raises(cli.CliConfigError, match="unknown key") as err:
            cli.parse_config(write(IV_TEXT + "colour = red\n"), seed=1)
        assert err.value.line == 5

    def test_type_mismatch(self, write):
        with pytest.raises(cli.CliConfigError, match="line 4"):
            cli.parse_config(write(IV_TEXT.replace("10000", "ten")), seed=1)

    def test_unknown_section(self, write):
        with pytest.raises(cli.CliConfigError, match="section"):
            cli.parse_config(write(IV_TEXT + "[plot]\nx = 1\n"), seed=1)

    def test_empty_overrides_equal_file(self, write):
        path = write(EXP_TEXT)
        a = cli.parse_config(path)
        b = cli.parse_config(path, [])
        assert a == b
        assert a[1].n_sweep == (100, 300) and a[1].replications == 40 and a[3] == 99

    def test_overrides(self, write):
        model, exp, _, seed = cli.parse_config(write(EXP_TEXT), ["n=50", "experiment.replications=3", "seed=5"])
        assert model.n == 50 and exp.replications == 3 and seed == 5 == exp.seed
        with pytest.raises(cli.CliConfigError, match="unknown override"):
            cli.parse_config(write(EXP_TEXT), ["colour=1"])
        with pytest.raises(cli.CliConfigError):
            cli.parse_config(write(EXP_TEXT), ["model.kind=x"])

    def test_intervals(self, write):
        text = EXP_TEXT + "intervals = 1:2, 2:inf\nwith_k = yes\n"
        _, exp, eff, _ = cli.parse_config(write(text))
        assert exp.intervals == ((1.0, 2.0), (2.0, float("inf")))
        assert exp.with_k is True
        dump = cli.dump_effective(eff)
        assert "intervals = 1.0:2.0, 2.0:inf" in dump

    def test_entropy_seed_is_printed(self, write, capsys):
        *_, seed = cli.parse_config(write(IV_TEXT))
        assert f"seed: {seed}" in capsys.readouterr().err

    def test_dump_roundtrip(self, write, tmp_path):
        _, exp, eff, _ = cli.parse_config(write(EXP_TEXT))
        again = cli.parse_config(write(cli.dump_effective(eff), "dump.ini"))
        assert again[1] == exp


class TestMain:
    def test_missing_file(self, tmp_path):
        assert cli.main(["degrees", str(tmp_path / "nope.ini")]) == cli.EXIT_CONFIG

    def test_config_error(self, write):
        assert cli.main(["degrees", write(IV_TEXT + "bad = 1\n")]) == cli.EXIT_CONFIG

    def test_runtime_error(self, write):
        text = "[model]\nmodel = I\nweight = pareto(beta=2)\nn = 1000000\nbuffer = 1e9\nmax_vertices = 1000\n"
        assert cli.main(["degrees", write(text), "--seed", "1"]) == cli.EXIT_RUNTIME

    def test_generate_edges(self, write, tmp_path):
        path = write(IV_TEXT.replace("10000", "10"))
        out = tmp_path / "out"
        assert cli.main(["generate", path, "--seed", "4", "--edges", "--out", str(out)]) == 0
        edges = (out / "sample_modelIV_n10_seed4.edges").read_text().splitlines()
        assert edges[1] == "# u v multiplicity"
        assert all(len(line.split()) == 3 for line in edges[2:])
        csv = (out / "sample_modelIV_n10_seed4.csv").read_text().splitlines()
        assert csv[0] == "id,weight,degree" and len(csv) == 11
        meta = json.loads((out / "sample_modelIV_n10_seed4.json").read_text())
        assert meta["constants"]["gamma"] == 2.5

    def test_degrees_deterministic(self, write, capsys):
        path = write(IV_TEXT.replace("10000", "50"))
        cli.main(["degrees", path, "--seed", "8"])
        a = capsys.readouterr().out
        cli.main(["degrees", path, "--seed", "8"])
        assert capsys.readouterr().out == a
        assert len(a.splitlines()) == 51

    def test_hill(self, write, capsys):
        assert cli.main(["hill", write(IV_TEXT), "--seed", "2", "--theta", "0.4"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["k"] == 40 and out["target"] == pytest.approx(0.4)

    def test_experiment_assert(self, write, tmp_path):
        path = write(EXP_TEXT)
        out = tmp_path / "rep"
        args = ["experiment", path, "--kind", "max-degree", "--assert", "--out", str(out), "--workers", "1"]
        args += ["--set", "n_sweep=10000", "--set", "replications=500"]
        assert cli.main(args) == 0
        files = sorted(os.listdir(out))
        assert files == ["max-degree_modelIV_n10000_seed99.csv", "max-degree_modelIV_n10000_seed99.json"]

    def test_experiment_assert_fails(self, write, tmp_path):
        # ordering with too few replications fails the R >= 30 rule
        path = write(EXP_TEXT.replace("replications = 40", "replications = 3"))
        code = cli.main(["experiment", path, "--kind", "ordering", "--assert", "--out", str(tmp_path)])
        assert code == cli.EXIT_ASSERT

    def test_workers_identical_and_roundtrip(self, write, tmp_path):
        path = write(EXP_TEXT)
        outs = []
        for w in ("1", "8"):
            d = tmp_path / f"w{w}"
            assert cli.main(["experiment", path, "--workers", w, "--out", str(d)]) == 0
            outs.append({f: (d / f).read_bytes() for f in os.listdir(d)})
        assert outs[0] == outs[1]
        json_path = tmp_path / "w1" / "max-degree_modelIV_n100-300_seed99.json"
        rerun = run_experiment(config_from_report(json_path))
        assert rows_to_csv(rerun.rows).encode() == outs[0]["max-degree_modelIV_n100-300_seed99.csv"]

    def test_bad_workers(self, write):
        assert cli.main(["experiment", write(EXP_TEXT), "--workers", "0"]) == cli.EXIT_CONFIG


def test_console_script(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text(IV_TEXT.replace("10000", "5"))
    res = subprocess.run(
        [sys.executable, "-m", "sfdegree.cli", "degrees", str(cfg), "--seed", "1"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
    assert res.stdout.startswith("id,weight,degree")
    res = subprocess.run([sys.executable, "-m", "sfdegree.cli", "degrees", str(tmp_path / "x")], capture_output=True)
    assert res.returncode == 1
