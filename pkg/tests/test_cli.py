import io
import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from dpnoise import cli, serialize
from dpnoise.errors import DomainError, NumericError

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _cells_equal(got: str, want: str):
    if got == want:
        return
    a, b = float(got), float(want)
    assert (math.isnan(a) and math.isnan(b)) or a == pytest.approx(b, rel=1e-12, abs=1e-15)


def assert_matches_golden(text: str, name: str):
    want = (GOLDEN / name).read_text()
    got_desc, got_head, got_rows = serialize.read_table(io.StringIO(text))
    want_desc, want_head, want_rows = serialize.read_table(io.StringIO(want))
    assert got_desc == want_desc
    assert got_head == want_head
    assert len(got_rows) == len(want_rows)
    for g, w in zip(got_rows, want_rows):
        assert len(g) == len(w)
        for x, y in zip(g, w):
            _cells_equal(x, y)


GOLDEN_CASES = [
    (["roc", "--kind", "gdp", "--mu", "1", "--grid", "11"], "roc_gdp.csv"),
    (["roc", "--kind", "fepsdelta", "--eps", "1", "--delta", "0.01", "--grid", "11"], "roc_fepsdelta.csv"),
    (["roc", "--kind", "calibrated", "--family", "tlap", "--eps", "1", "--delta", "0.01", "--grid", "11"], "roc_calibrated_tlap.csv"),
    (["tables", "--table", "fisher", "--n-values", "2,10,30", "--mc-count", "0"], "table_fisher.csv"),
    (["tables", "--table", "mechanisms"], "table_mechanisms.csv"),
    (["clt-experiment", "--n-values", "5", "--N-values", "200", "--seeds", "2", "--grid", "101"], "clt_small.csv"),
    (["sample", "--mode", "norm_power", "--n", "3", "--count", "4", "--seed", "1"], "sample_norm_power.csv"),
]


@pytest.mark.parametrize("argv,name", GOLDEN_CASES, ids=[c[1] for c in GOLDEN_CASES])
def test_golden(argv, name, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    assert_matches_golden(out, name)


class TestRoc:
    def test_row_count(self, capsys):
        code, out, _ = run(["roc", "--kind", "gdp", "--mu", "1", "--grid", "101"], capsys)
        assert code == 0
        desc, a, b = serialize.read_curve_csv(io.StringIO(out))
        assert a.size == 101 and desc == {"kind": "gdp", "mu": 1.0}

    def test_conjugate_records_clamped(self, capsys):
        code, out, _ = run(["roc", "--kind", "conjugate", "--eps", "1", "--delta", "0.01", "--grid", "5"], capsys)
        assert code == 0
        desc, _, _ = serialize.read_curve_csv(io.StringIO(out))
        assert desc["kind"] == "conjugate" and "clamped" in desc

    def test_empirical(self, capsys):
        argv = ["roc", "--kind", "empirical", "--n", "30", "--p", "3.14159", "--alpha", "2.71828", "--c", "0.5772",
                "--mu", "1", "--N", "2000", "--seed", "1", "--grid", "101"]
        code, out, _ = run(argv, capsys)
        assert code == 0
        _, a, b = serialize.read_curve_csv(io.StringIO(out))
        assert a.size == 101 and b[0] == 1.0 and b[-1] == 0.0
        assert np.all(np.diff(b) <= 0)
        assert run(argv, capsys)[1] == out

    def test_noise_tgu_unsupported_shift(self, capsys):
        code, _, err = run(["roc", "--kind", "noise", "--family", "tgu", "--p-geom", "0.5", "--shift", "0.5"], capsys)
        assert code == 2 and "error" in err


class TestConfig:
    def test_precedence(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"mu": 2.0, "grid": 5}))
        code, out, err = run(["roc", "--config", str(cfg), "--grid", "3"], capsys)
        assert code == 0
        echoed = json.loads(err.splitlines()[0])
        assert echoed["mu"] == 2.0 and echoed["grid"] == 3 and echoed["kind"] == "gdp"
        _, a, _ = serialize.read_curve_csv(io.StringIO(out))
        assert a.size == 3

    def test_unknown_key(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"sigma": 1.0}))
        code, _, err = run(["roc", "--config", str(cfg)], capsys)
        assert code == 2 and "unknown config keys" in err

    @pytest.mark.parametrize("payload", ['{"grid": "ten"}', '{"kind": "spline"}', "[1, 2]", "{not json"])
    def test_bad_config(self, tmp_path, capsys, payload):
        cfg = tmp_path / "c.json"
        cfg.write_text(payload)
        assert run(["roc", "--config", str(cfg)], capsys)[0] == 2

    def test_missing_config(self, capsys):
        assert run(["roc", "--config", "/nonexistent/c.json"], capsys)[0] == 2

    def test_effective_config_lists(self):
        eff = cli.effective_config("clt-experiment", {}, {"n_values": 5})
        assert eff["n_values"] == [5]
        with pytest.raises(DomainError):
            cli.effective_config("clt-experiment", {}, {"seeds": 1.5})


class TestErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["roc", "--kind", "gdp", "--mu", "-1"],
            ["roc", "--grid", "1"],
            ["roc", "--kind", "fepsdelta"],
            ["calibrate", "--family", "gaussian", "--budget", "pure", "--eps", "1"],
            ["answer", "--mechanism", "linf", "--values", "1,2,3"],
            ["answer"],
            ["tables", "--pairs", "1-1"],
            ["sample", "--count", "0"],
        ],
    )
    def test_domain_exit_2(self, argv, capsys):
        code, out, err = run(argv, capsys)
        assert code == 2
        assert out == ""
        assert err.strip().splitlines()[-1].startswith("dpnoise ")

    @pytest.mark.parametrize("argv", [["nosuch"], ["roc", "--bogus", "1"], ["roc", "--grid", "x"], ["roc", "--gri", "3"], []])
    def test_usage_exit_2(self, argv, capsys):
        assert run(argv, capsys)[0] == 2

    def test_numeric_exit_3(self, capsys, monkeypatch):
        def overflow(cfg, out):
            raise NumericError("overflow")

        monkeypatch.setitem(cli.HANDLERS, "fisher", overflow)
        code, out, err = run(["fisher"], capsys)
        assert code == 3 and out == "" and "numeric failure" in err


class TestCommands:
    def test_calibrate(self, capsys):
        code, out, _ = run(["calibrate", "--family", "laplace", "--eps", "0.5", "--sensitivity", "2"], capsys)
        res = json.loads(out)
        assert code == 0 and res["noise"]["scale"] == 4.0 and res["second_moment"] == 32.0

    def test_fisher(self, capsys):
        code, out, _ = run(["fisher", "--n", "30", "--p", "2", "--alpha", "2", "--mu", "1", "--mc-count", "1000"], capsys)
        res = json.loads(out)
        assert res["summary"]["fisher_norm"] == pytest.approx(2.0)
        assert res["gdp_scale"] == pytest.approx(math.sqrt(2.0))
        assert res["fisher_mc"]["count"] == 1000

    def test_answer_reproducible(self, capsys):
        argv = ["answer", "--values", "1,2,3", "--family", "gaussian", "--mu", "1", "--seed", "4"]
        code, out, _ = run(argv, capsys)
        assert code == 0
        assert run(argv, capsys)[1] == out
        assert json.loads(out)["spec"]["n"] == 3

    def test_answer_linf(self, capsys):
        values = ",".join(["0"] * 20)
        code, out, _ = run(["answer", "--mechanism", "linf", "--values", values, "--sensitivity", "1"], capsys)
        res = json.loads(out)
        assert code == 0 and res["report"]["n"] == 20 and len(res["values"]) == 20

    def test_answer_norm_power(self, capsys):
        code, out, _ = run(["answer", "--mechanism", "norm_power", "--values", "0,0", "--p", "3", "--alpha", "2"], capsys)
        assert code == 0 and json.loads(out)["spec"]["noise"]["kind"] == "norm_power"

    def test_uncertainty(self, capsys):
        code, out, _ = run(["uncertainty", "--n", "10", "--p", "1", "--alpha", "1", "--count", "2000"], capsys)
        res = json.loads(out)
        assert res["l2_product"] == pytest.approx(20.0) and res["l2_bound_holds"]

    def test_levy_single_sample(self, capsys, monkeypatch):
        code, out, _ = run(["levy"], capsys, stdin="0\n", monkeypatch=monkeypatch)
        assert code == 0 and json.loads(out)["levy_distance"] == pytest.approx(0.35958045205206454, abs=1e-9)

    def test_levy_file_standardize(self, tmp_path, capsys):
        f = tmp_path / "x.csv"
        f.write_text("x\n" + "\n".join(str(v) for v in np.random.default_rng(0).normal(5, 3, 4000)))
        code, out, _ = run(["levy", "--input", str(f), "--standardize", "true"], capsys)
        assert code == 0 and json.loads(out)["levy_distance"] < 0.02

    def test_levy_empty(self, capsys, monkeypatch):
        assert run(["levy"], capsys, stdin="", monkeypatch=monkeypatch)[0] == 2

    def test_sample_binary(self, tmp_path, capsys):
        path = tmp_path / "x.bin"
        code, _, err = run(["sample", "--mode", "independent", "--p", "1.5", "--n", "4", "--count", "5",
                            "--format", "binary", "--out", str(path)], capsys)
        assert code == 0
        x = serialize.samples_from_bytes(path.read_bytes(), 4)
        assert x.shape == (5, 4)
        assert json.loads(err.strip().splitlines()[-1])["shape"] == [5, 4]

    @pytest.mark.parametrize("mode", ["noise1d", "sphere"])
    def test_sample_modes(self, mode, capsys):
        code, out, _ = run(["sample", "--mode", mode, "--count", "3"], capsys)
        assert code == 0 and len(out.splitlines()) == 5

    def test_out_file_not_written_on_failure(self, tmp_path, capsys):
        path = tmp_path / "o.csv"
        assert run(["roc", "--kind", "fepsdelta", "--out", str(path)], capsys)[0] == 2
        assert not path.exists()

    def test_clt_flags_axis_laplace(self, capsys):
        code, out, _ = run(["clt-experiment", "--p", "1", "--alpha", "1", "--c", "1", "--direction-mode", "axis",
                            "--N-values", "5000", "--seeds", "1"], capsys)
        _, head, rows = serialize.read_table(io.StringIO(out))
        assert code == 0 and rows[0][head.index("flagged")] == "true"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dpnoise", "roc", "--grid", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "alpha,beta"
