import argparse
import csv
import json
import math

import pytest

from lzeros.cli import CUTOFF_ENV, EXIT_FAIL, EXIT_OK, EXIT_USAGE, build_parser, cmd_verify, main, parse_complex
from lzeros.curves import polyline_winding, real_axis_crossings


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def doc_of(out):
    doc = json.loads(out)
    # canonical form: re-serialising the parsed report reproduces it byte for byte
    assert json.dumps(doc, sort_keys=True, indent=2) == out.strip()
    return doc


@pytest.mark.parametrize(
    "text, z",
    [("2", 2), ("2+0i", 2), ("1.5-3.25i", 1.5 - 3.25j), ("2+i", 2 + 1j), ("1e0+2e1i", 1 + 20j), ("3+4j", 3 + 4j)],
)
def test_parse_complex(text, z):
    assert parse_complex(text) == z


def test_parse_complex_rejects_garbage():
    with pytest.raises(argparse.ArgumentTypeError):
        parse_complex("two")


def test_eval_zeta_two(capsys):
    code, out, err = run(capsys, "eval", "--spec", "zeta", "--s", "2+0i")
    assert code == EXIT_OK
    doc = doc_of(out)
    assert doc["value"][0] == pytest.approx(math.pi**2 / 6, abs=1e-7)
    assert "1.644934066" in err


def test_eval_combo(capsys):
    code, out, _ = run(capsys, "eval", "--combo", "--N", "2", "--s", "2")
    assert code == EXIT_OK
    # zeta(2) + zeta(4)
    assert doc_of(out)["value"][0] == pytest.approx(math.pi**2 / 6 + math.pi**4 / 90, abs=1e-7)


@pytest.mark.parametrize("method", ["em", "euler", "direct"])
def test_eval_methods_agree(capsys, method):
    code, out, _ = run(capsys, "eval", "--s", "3+1i", "--method", method, "--prime-cutoff", "20000")
    assert code == EXIT_OK
    v = doc_of(out)["value"]
    # zeta(3+i) from mpmath
    assert complex(*v) == pytest.approx(1.10721440843141 - 0.148290867178175j, abs=1e-6)


def test_eval_rejects_critical_strip(capsys):
    code, _, err = run(capsys, "eval", "--s", "0.5+14i")
    assert code == EXIT_USAGE
    assert "not > 1" in err


def test_strict_tail_failure(capsys):
    code, _, err = run(capsys, "eval", "--s", "1.01", "--method", "euler", "--prime-cutoff", "100", "--strict")
    assert code == EXIT_FAIL
    assert "tail bound" in err


def test_env_cutoff_is_used(capsys, monkeypatch):
    monkeypatch.setenv(CUTOFF_ENV, "50")
    _, out, _ = run(capsys, "eval", "--s", "2", "--method", "euler")
    small = doc_of(out)["tail_bound"]
    monkeypatch.setenv(CUTOFF_ENV, "5000")
    _, out, _ = run(capsys, "eval", "--s", "2", "--method", "euler")
    assert doc_of(out)["tail_bound"] < small / 10
    monkeypatch.setenv(CUTOFF_ENV, "lots")
    code, _, _ = run(capsys, "eval", "--s", "2", "--method", "euler")
    assert code == EXIT_USAGE


def test_char_spec_needs_file(capsys, tmp_path):
    code, _, _ = run(capsys, "eval", "--spec", "char", "--s", "2")
    assert code == EXIT_USAGE
    f = tmp_path / "chi.json"
    f.write_text(json.dumps({"modulus": 4, "values": {"1": 1, "3": -1}}))
    code, out, _ = run(capsys, "eval", "--spec", "char", "--char-file", str(f), "--s", "2")
    assert code == EXIT_OK
    # Catalan's constant
    assert doc_of(out)["value"][0] == pytest.approx(0.915965594177219, abs=1e-7)
    code, _, _ = run(capsys, "eval", "--spec", "char", "--char-file", str(tmp_path / "missing.json"), "--s", "2")
    assert code == EXIT_USAGE


def test_fig1_csv(capsys, tmp_path):
    path = tmp_path / "fig1.csv"
    code, out, _ = run(capsys, "curve", "fig1", "--r", "2", "--samples", "4096", "--out", str(path))
    assert code == EXIT_OK
    assert doc_of(out)["rows"] == 4096
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["theta", "u", "v"]
    data = [[float(x) for x in r] for r in rows[1:]]
    assert len(data) == 4096
    # every number is written with 17 significant digits
    assert all(len(x.lstrip("-").replace(".", "").split("e")[0].lstrip("0")) <= 17 for x in rows[1])
    assert abs(polyline_winding([r[1] for r in data], [r[2] for r in data])) == 2
    # u at sign changes of v (linear interpolation between emitted rows, closing the loop)
    crossings = []
    for a, b in zip(data, data[1:] + data[:1]):
        if a[2] == 0.0:
            crossings.append(a[1])
        elif a[2] * b[2] < 0:
            crossings.append(a[1] + (b[1] - a[1]) * a[2] / (a[2] - b[2]))
    want = [c.value for c in real_axis_crossings(2)]
    assert all(min(abs(u - w) for w in want) < 1e-5 for u in crossings)
    assert all(min(abs(u - w) for u in crossings) < 1e-5 for w in want)


def test_fig1_to_stdout_and_bad_radius(capsys):
    code, out, _ = run(capsys, "curve", "fig1", "--samples", "16")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "theta,u,v" and len(lines) == 17
    code, _, _ = run(capsys, "curve", "fig1", "--r", "1")
    assert code == EXIT_USAGE


def test_region(capsys):
    code, out, _ = run(capsys, "region")
    assert code == EXIT_OK
    doc = doc_of(out)
    status = {v["k"]: v["status"] for v in doc["verdicts"]}
    assert len(status) == 12
    assert {status[k] for k in range(9, 13)} == {"ZerosExist"}


def test_verify_subset_passes(capsys):
    code, out, err = run(capsys, "verify", "--only", "1,2,3")
    assert code == EXIT_OK
    doc = doc_of(out)
    assert doc["passed"] and [r["number"] for r in doc["results"]] == [1, 2, 3]
    assert err.count("[PASS]") == 3


def test_verify_unknown_group(capsys):
    code, _, _ = run(capsys, "verify", "--only", "nonsense")
    assert code == EXIT_USAGE


@pytest.mark.parametrize("only, constants, name", [("5", {"upper": 0.7}, "upper reach"), ("11", {"k_theta": 0.8}, "K_theta")])
def test_verify_catches_corrupted_constant(capsys, only, constants, name):
    args = build_parser().parse_args(["verify", "--only", only])
    assert cmd_verify(args) == EXIT_OK
    capsys.readouterr()
    assert cmd_verify(args, constants) == EXIT_FAIL
    _, err = capsys.readouterr()
    assert name in err and "[FAIL]" in err


def test_verify_names_region_criterion_for_corrupted_lower(capsys):
    args = build_parser().parse_args(["verify", "--only", "region"])
    assert cmd_verify(args, {"lower": 0.7}) == EXIT_FAIL
    _, err = capsys.readouterr()
    assert "[FAIL]  4 lower reach" in err and "> 0.7" in err


def test_demo(capsys, tmp_path):
    path = tmp_path / "sols.json"
    code, out, err = run(capsys, "demo", "--samples", "8", "--out", str(path))
    assert code == EXIT_OK
    doc = doc_of(out)
    assert doc["coverage"] and doc["worst_residual"] < 1e-6
    assert len(doc["targets"]) == 9
    sols = json.loads(path.read_text())
    assert len(sols) == 9 and all(s["residual"] < 1e-6 for s in sols)


def test_demo_partition_failure(capsys):
    code, _, err = run(capsys, "demo", "--sigma", "5")
    assert code == EXIT_FAIL
    assert "p=2" in err


def test_lemma(capsys):
    code, out, _ = run(capsys, "lemma", "--N", "3")
    assert code == EXIT_OK
    assert doc_of(out)["contained"] is True


def test_zeros_certifies_power_zero(capsys):
    code, out, _ = run(
        capsys, "zeros", "--spec", "zeta-power", "--k", "9", "--dilations", "2,3",
        "--rect", "1.01,1.1,37,38.5", "--grid", "48",
    )
    assert code == EXIT_OK
    zs = [z for z in doc_of(out)["zeros"] if z["certified"]]
    assert any(abs(complex(*z["s"]) - (1.0345335481 + 37.6935470964j)) < 1e-8 for z in zs)
