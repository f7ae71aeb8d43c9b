import csv
import io
import json
import math

import numpy as np
import pytest

from liouville_bcft.cli import (EXIT_EVAL, EXIT_FAIL, EXIT_IO, EXIT_OK,
                                EXIT_USAGE, format_scan_csv, main,
                                parse_complex, scan_rows)
from liouville_bcft.specialfn import (POLE_GUARD, LatticeKind,
                                      LiouvilleParams, lattice_query)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["param", "value_re", "value_im", "err_est", "status"]
    return rows[1:]


def test_parse_complex():
    assert parse_complex("1.5") == 1.5
    assert parse_complex("1.5+0.2j") == 1.5 + 0.2j
    assert parse_complex("-0.3-2j") == -0.3 - 2j


def test_eval_rfzz_at_q(capsys):
    Q = LiouvilleParams(1.3).Q
    code, out, _ = run(capsys, "eval", "rfzz", "--gamma", "1.3",
                       "--beta", repr(Q), "--sigma", f"{Q / 2!r},{Q / 2!r}",
                       "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["target"] == "rfzz"
    assert set(doc) == {"target", "params", "value", "err_est"}
    assert abs(doc["value"]["re"] + 1) < 1e-9 and abs(doc["value"]["im"]) < 1e-9


def test_eval_dgamma_centre(capsys):
    code, out, _ = run(capsys, "eval", "dgamma", "--gamma", "1.0",
                       "--x", "1.25")
    assert code == EXIT_OK
    value = complex(out.split("=")[1].split()[0])
    assert abs(value - 1) < 1e-12


def test_eval_collision_exit_2(capsys):
    Q = LiouvilleParams(1.2).Q
    code, _, err = run(capsys, "eval", "hpt", "--gamma", "1.2",
                       "--beta", f"{2 * Q - 3.3!r},1.6,1.7",
                       "--sigma", ",".join([repr(Q / 2)] * 3),
                       "--format", "json")
    assert code == EXIT_EVAL == 2
    error = json.loads(err)["error"]
    assert error["kind"] == "PoleCollision"
    assert {"n", "m", "left_seed", "right_seed"} <= set(error["witness"])


def test_eval_text_error(capsys):
    code, _, err = run(capsys, "eval", "dgamma", "--gamma", "1.0", "--x", "-0.5")
    assert code == EXIT_EVAL and err.startswith("error: PoleEncountered")


@pytest.mark.parametrize("argv", [
    ["eval", "rfzz", "--gamma", "1.3", "--beta", "1.4"],
    ["eval", "rfzz", "--gamma", "1.3", "--beta", "1.4", "--sigma", "1,2,3"],
    ["eval", "dgamma", "--gamma", "1.0", "--x", "1+"],
    ["eval", "nosuch"],
    ["verify", "--cases", "x"],
    ["scan", "dgamma", "--gamma", "1", "--vary", "x", "--start", "0",
     "--stop", "1", "--count", "1"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == EXIT_USAGE
    capsys.readouterr()


def test_eval_domain_error(capsys):
    code, _, _ = run(capsys, "eval", "dgamma", "--gamma", "2.5", "--x", "1")
    assert code == EXIT_EVAL


def test_verify_tight_tolerance_fails(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--gamma-list", "1.3", "--cases",
                       "1", "--seed", "3", "--tol", "1e-15", "--jobs", "1",
                       "--report", str(path))
    assert code == EXIT_FAIL
    reports = json.loads(path.read_text())
    failed = [r for r in reports if not r["pass"]]
    assert failed
    assert sum(line.startswith("FAIL ") for line in out.splitlines()) \
        == len(failed)


def test_verify_seed_byte_identical(capsys, tmp_path):
    texts = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        code, _, _ = run(capsys, "verify", "--gamma-list", "0.9", "--cases",
                         "1", "--seed", "17", "--jobs", "1",
                         "--report", str(path))
        assert code in (EXIT_OK, EXIT_FAIL)
        texts.append(path.read_bytes())
    assert texts[0] == texts[1]
    doc = json.loads(texts[0])
    assert all(r["elapsed_s"] == 0.0 for r in doc)
    # round trip is byte-identical
    again = (json.dumps(doc, indent=2) + "\n").encode()
    assert again == texts[0]


def test_verify_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--gamma-list", "", "--report",
                       str(tmp_path / "missing" / "r.json"))
    assert code == EXIT_IO and "cannot write" in err


def test_verify_empty_list(capsys):
    code, out, err = run(capsys, "verify", "--gamma-list", "")
    assert code == EXIT_OK and json.loads(out) == []
    assert "0/0" in err


def test_scan_rfzz_reflection(capsys, tmp_path):
    g = 1.3
    Q = LiouvilleParams(g).Q
    s1, s2 = Q / 2 + 0.07, Q / 2 - 0.05
    common = ["--gamma", str(g), "--sigma", f"{s1!r},{s2!r}", "--jobs", "1"]
    path = tmp_path / "a.csv"
    code, _, _ = run(capsys, "scan", "rfzz", "--vary", "beta", "--start",
                     "1.2", "--stop", "2.2", "--count", "50", "-o", str(path),
                     *common)
    assert code == EXIT_OK
    rows = read_csv(path.read_text())
    assert len(rows) == 50
    # the reflected scan runs over 2Q - beta in reverse order
    code, out, _ = run(capsys, "scan", "rfzz", "--vary", "beta", "--start",
                       repr(2 * Q - 1.2), "--stop", repr(2 * Q - 2.2),
                       "--count", "50", *common)
    refl = read_csv(out)
    for r1, r2 in zip(rows, refl):
        if r1[4] != "ok" or r2[4] != "ok":
            continue
        v1 = complex(float(r1[1]), float(r1[2]))
        v2 = complex(float(r2[1]), float(r2[2]))
        assert abs(v1 * v2 - 1) < 1e-9
    assert sum(r[4] == "ok" for r in rows) >= 45


def test_scan_marks_gamma_poles(capsys):
    p = LiouvilleParams(1.0)
    code, out, _ = run(capsys, "scan", "dgamma", "--gamma", "1.0", "--vary",
                       "x", "--start", "-2.2", "--stop", "0.3", "--count",
                       "26", "--jobs", "1")
    assert code == EXIT_OK
    rows = read_csv(out)
    poles = [r[4] == "pole" for r in rows]
    expected = [lattice_query(LatticeKind.GAMMA_POLE, float(r[0]), p,
                              POLE_GUARD) is not None for r in rows]
    assert poles == expected and sum(poles) == 5
    for r, is_pole in zip(rows, poles):
        assert (r[1] == "") == is_pole


def test_scan_vary_conflict(capsys):
    code, _, err = run(capsys, "scan", "dgamma", "--gamma", "1.0", "--x", "1",
                       "--vary", "x", "--start", "0", "--stop", "1",
                       "--count", "3")
    assert code == EXIT_USAGE and "both varied and fixed" in err
    code, _, _ = run(capsys, "scan", "dgamma", "--gamma", "1.0", "--vary",
                     "beta", "--start", "0", "--stop", "1", "--count", "3")
    assert code == EXIT_USAGE


def test_scan_deterministic_and_parallel_order():
    fixed = {"gamma": 1.1}
    grid = np.linspace(0.2, 2.0, 7)
    serial = scan_rows("dsine", "x", grid, fixed)
    parallel = scan_rows("dsine", "x", grid, fixed, jobs=2)
    assert format_scan_csv(serial) == format_scan_csv(parallel)


def test_csv_round_trip():
    rows = scan_rows("dgamma", "x", np.linspace(-1.2, 0.9, 8), {"gamma": 0.8})
    text = format_scan_csv(rows)
    parsed = read_csv(text)
    back = []
    for param, re_, im, err, status in parsed:
        value = None if re_ == "" else complex(float(re_), float(im))
        back.append((float(param), value, None if err == "" else float(err),
                     status))
    assert format_scan_csv(back) == text
    assert "\r" not in text


def test_no_nonfinite_output(capsys):
    # a scan sweeping through poles of a fast-growing function
    code, out, _ = run(capsys, "scan", "dgamma", "--gamma", "0.6", "--vary",
                       "x", "--start", "-6", "--stop", "12", "--count", "37",
                       "--jobs", "1")
    assert code == EXIT_OK
    for row in read_csv(out):
        for cell in row[1:4]:
            if cell:
                assert math.isfinite(float(cell))
        assert row[4] in ("ok", "pole", "error")
