"""Subcommands, output formats and exit codes."""
import csv
import io
import json

import pytest

from minrep import cli


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_example(capsys):
    code, out, _ = run(capsys, "spectrum", "--a", "1", "--m", "3", "--count", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "1" and doc["eigenvalues"] == [-1, -2, -3]


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--a", "2", "--m", "1", "--count", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["index", "value-real", "value-imag"]
    assert rows[1:] == [["0", "-0.25", "0.0"], ["1", "-0.75", "0.0"]]


def test_commutators_pass(capsys):
    code, out, _ = run(capsys, "commutators", "--a", "2", "--m", "3")
    assert code == 0 and json.loads(out)["verdict"] == "PASS"


def test_cone_check_example(tmp_path, capsys):
    path = tmp_path / "cone.json"
    path.write_text(json.dumps({"dim": 2, "generators": [["1", "0"], ["1", "1"]]}))
    code, out, _ = run(capsys, "cone-check", "--c1", str(path), "--beta", "1,0")
    doc = json.loads(out)
    assert code == 0 and doc["trivial"] is False and doc["witness"] == ["1", "0"]
    code, out, _ = run(capsys, "cone-check", "--c1", str(path), "--beta", "0,1")
    assert json.loads(out)["trivial"] is True


def test_transform_and_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "transform", "--a", "1", "--m", "3", "--coeffs", "0,1", "--output", str(target))
    doc = json.loads(target.read_text())
    assert code == 0 and out == ""
    assert set(doc) >= {"sector", "phase", "backend", "calibration"}
    assert doc["values"][1] == pytest.approx([-1.0, 0.0], abs=1e-15)
    code, out, _ = run(capsys, "transform", "--lam", "1.5", "--count", "3")
    doc = json.loads(out)
    assert doc["backend"] == "kernel" and doc["calibration"]["c_mu"] == pytest.approx(doc["analytic_c_mu"])


def test_semigroup_bargmann_fourth_order_catalog(capsys):
    code, out, _ = run(capsys, "semigroup", "--a", "1", "--m", "3", "--t", "1", "--count", "2")
    doc = json.loads(out)
    assert code == 0 and doc["hs_norm_series"] == pytest.approx(doc["hs_norm_kernel"], rel=1e-8)
    code, out, _ = run(capsys, "bargmann", "--lam", "0.5", "--kmax", "3")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "fourth-order", "--mu", "1/3", "--nu", "-1", "--reduce")
    doc = json.loads(out)
    assert code == 0 and doc["reduction"]["found"] and len(doc["eigenfunctions"]) == 6
    code, out, _ = run(capsys, "fourth-order", "--frobenius", "1/3,-1/5,2/7,5/11", "--N", "10")
    assert code == 0 and json.loads(out)["residual_zero"]
    code, out, _ = run(capsys, "catalog")
    assert len(json.loads(out)["families"]) == 4


def test_verify_subset(capsys):
    code, out, err = run(capsys, "verify", "--criteria", "2,3,9")
    assert code == 0 and json.loads(out)["passed"]
    assert err.count("[PASS]") == 3


def test_cache_dir_flag(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("MINREP_CACHE", raising=False)
    code, _, _ = run(capsys, "semigroup", "--a", "1", "--m", "3", "--t", "0.5", "--cache-dir", str(tmp_path))
    assert code == 0


def exit_code(argv):
    """Return code of ``cli.run``, including argparse's SystemExit path."""
    try:
        return cli.run(argv)
    except SystemExit as exc:
        return exc.code


@pytest.mark.parametrize("argv", [
    ["spectrum", "--a", "x"],
    ["spectrum", "--a", "1", "--m", "1"],
    ["catalog", "--family", "nope"],
    ["semigroup", "--t", "-1"],
    ["cone-check", "--c1", "/nonexistent.json", "--beta", "1,0"],
    ["cone-check", "--c1", "/nonexistent.json"],
    ["verify", "--criteria", "12"],
    [],
])
def test_validation_errors_exit_1(argv, capsys):
    assert exit_code(argv) == 1
    assert capsys.readouterr().err


def test_acceptance_failure_exit_2(monkeypatch, capsys):
    from minrep import bargmann
    real = bargmann.cayley_consistency

    def broken(op, kmax=5, tol=1e-7):
        rep = real(op, kmax, tol)
        rep["passed"] = False
        return rep

    monkeypatch.setattr(bargmann, "cayley_consistency", broken)
    code, _, _ = run(capsys, "bargmann", "--lam", "1.0", "--kmax", "2")
    assert code == 2
