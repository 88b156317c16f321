import json
import re
import subprocess
import sys

import numpy as np
import pytest
import scipy.io

from conftest import DATA
from sdcong.cli import main


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pair_golden6(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, out, _ = run(["pair", DATA / "golden6_A.json", DATA / "golden6_B.json", "--out", cert], capsys)
    assert code == 0
    assert "p=3 q=2 r=1" in out
    ratios = re.search(r"ratios diagB/diagA: \[(.*)\]", out).group(1)
    np.testing.assert_allclose([float(x) for x in ratios.split(",")], [-2.2837, 0.7458, 1.5657], atol=1e-3)
    data = json.loads(cert.read_text())
    assert data["verdict"] == "SD" and len(data["P"]) == 6 and len(data["diagonals"]) == 2


def test_pair_verbose_trace(capsys):
    code, out, _ = run(["pair", DATA / "golden6_A.json", DATA / "golden6_B.json", "--verbose"], capsys)
    assert code == 0
    eig = re.search(r"eigenvalues of B3: \[(.*)\]", out).group(1)
    np.testing.assert_allclose(sorted(float(x) for x in eig.split(",")), [0, 1, 6], atol=1e-9)
    for name in ("Q2 (6x6)", "Q3 (6x6)", "V2 (3x3)", "J (", "Q4 (6x6)", "P (6x6)"):
        assert name in out


def test_pair_identity(capsys, tmp_path):
    cert = tmp_path / "c.json"
    code, _, _ = run(["pair", DATA / "eye3.json", DATA / "eye3.json", "--out", cert], capsys)
    assert code == 0
    np.testing.assert_allclose(np.abs(json.loads(cert.read_text())["P"]), np.eye(3))


def test_pair_nonreal(capsys, tmp_path):
    cert = tmp_path / "c.json"
    code, out, _ = run(["pair", DATA / "nonreal_A.json", DATA / "nonreal_B.json", "--out", cert], capsys)
    assert code == 1
    assert "obstruction: NonRealEigenvalue" in out
    assert not cert.exists()


def test_pair_indeterminate(capsys, tmp_path):
    (tmp_path / "a.json").write_text(json.dumps({"n": 2, "data": [[1, 0], [0, 0]]}))
    (tmp_path / "b.json").write_text(json.dumps({"n": 2, "data": [[1, 3e-8], [3e-8, 0]]}))
    code, out, _ = run(["pair", tmp_path / "a.json", tmp_path / "b.json"], capsys)
    assert code == 2
    assert "Borderline" in out


def test_pair_tolerance_flags(capsys, tmp_path):
    (tmp_path / "a.json").write_text(json.dumps({"n": 2, "data": [[1, 0], [0, 0]]}))
    (tmp_path / "b.json").write_text(json.dumps({"n": 2, "data": [[1, 3e-8], [3e-8, 0]]}))
    code, _, _ = run(["pair", tmp_path / "a.json", tmp_path / "b.json", "--tol-offdiag", "1e-3", "--tol-rank", "1e-12"], capsys)
    assert code == 0
    code, _, err = run(["pair", tmp_path / "a.json", tmp_path / "b.json", "--tol-cluster", "2"], capsys)
    assert code == 3 and "eps_cluster" in err


def test_pair_matrix_market(capsys, tmp_path):
    A = np.array([[1.0, 2.0], [2.0, 20.0]])
    scipy.io.mmwrite(str(tmp_path / "a.mtx"), A)
    scipy.io.mmwrite(str(tmp_path / "b.mtx"), np.array([[-1.0, -2.0], [-2.0, -28.0]]))
    code, _, _ = run(["pair", tmp_path / "a.mtx", tmp_path / "b.mtx"], capsys)
    assert code == 0


def test_json_symmetrized(capsys, tmp_path):
    (tmp_path / "a.json").write_text(json.dumps({"n": 2, "data": [[1, 0], [2, 1]]}))
    code, out, _ = run(["pair", tmp_path / "a.json", DATA / "eye3.json"], capsys)
    assert code == 3  # dimension mismatch
    (tmp_path / "b.json").write_text(json.dumps({"n": 2, "data": [[1, 0], [0, 2]]}))
    code, out, _ = run(["pair", tmp_path / "a.json", tmp_path / "b.json"], capsys)
    assert code in (0, 1, 2)


@pytest.mark.parametrize(
    "argv",
    [
        ["pair", "missing.json", "missing.json"],
        ["pair"],
        ["frobnicate"],
        ["family", DATA / "triple_A.json", DATA / "triple_B.json", DATA / "triple_C.json", "--pencil", "1,0"],
        ["family", DATA / "triple_A.json", DATA / "triple_B.json", DATA / "triple_C.json", "--pencil", "1,a,0"],
        ["reformulate", DATA / "trs.json", "--form", "lp"],
        ["reformulate", DATA / "trs.json", "--form", "sdp"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, _ = run(argv, capsys)
    assert code == 3


def test_bad_json(capsys, tmp_path):
    (tmp_path / "a.json").write_text("{not json")
    code, _, err = run(["pair", tmp_path / "a.json", tmp_path / "a.json"], capsys)
    assert code == 3 and err.startswith("error:")


def test_family_triple(capsys):
    files = [DATA / f"triple_{c}.json" for c in "ABC"]
    code, out, _ = run(["family", *files, "--pencil", "1,0,0"], capsys)
    assert code == 0 and "pencil class: Definite" in out
    code, out, _ = run(["family", *files], capsys)
    assert code == 0 and "pencil class: Definite" in out


def test_family_commutation_failure(capsys):
    files = [DATA / "eye3.json", DATA / "diag123.json", DATA / "offdiag3.json"]
    code, out, _ = run(["family", *files], capsys)
    assert code == 1
    assert "CommutationFailure" in out and "failed pair: (1, 2)" in out


def test_reformulate_trs(capsys, tmp_path):
    out_path = tmp_path / "m.json"
    code, out, _ = run(["reformulate", DATA / "trs.json", "--verify", 200, "--out", out_path], capsys)
    assert code == 0
    assert "ExactAlways" in out
    res = json.loads(out_path.read_text())
    assert res["model"]["kind"] == "socp" and res["exactness"]["status"] == "ExactAlways"
    assert res["verification"]["passed"]
    assert set(res["model"]) >= {"kind", "vars", "obj", "rows", "cones", "provenance"}


def test_reformulate_igtrs(capsys, tmp_path):
    out_path = tmp_path / "m.json"
    code, _, _ = run(["reformulate", DATA / "igtrs.json", "--out", out_path], capsys)
    assert code == 0
    rows = json.loads(out_path.read_text())["model"]["rows"]
    assert len(rows) == 2
    np.testing.assert_allclose(rows[0]["coeffs"], -np.array(rows[1]["coeffs"]))


def test_reformulate_not_sd(capsys):
    code, out, _ = run(["reformulate", DATA / "gtrs_notsd.json"], capsys)
    assert code == 1 and "NonRealEigenvalue" in out


def test_reformulate_lp_text(capsys, tmp_path):
    out_path = tmp_path / "m.lp"
    code, _, _ = run(["reformulate", DATA / "homogeneous.json", "--form", "lp", "--out", out_path], capsys)
    assert code == 0
    assert out_path.read_text().rstrip().endswith("End")


def test_verify_certificate(capsys, tmp_path):
    cert = tmp_path / "c.json"
    run(["family", *[DATA / f"triple_{c}.json" for c in "ABC"], "--out", cert], capsys)
    code, out, _ = run(["verify", cert, *[DATA / f"triple_{c}.json" for c in "ABC"]], capsys)
    assert code == 0 and "certificate: valid" in out
    data = json.loads(cert.read_text())
    data["P"] = (np.array(data["P"]) @ np.array([[1.0, 0.3], [0.0, 1.0]])).tolist()  # mix columns
    cert.write_text(json.dumps(data))
    code, out, _ = run(["verify", cert, *[DATA / f"triple_{c}.json" for c in "ABC"]], capsys)
    assert code == 1 and "INVALID" in out


def test_deterministic_reports(capsys):
    argv = ["reformulate", DATA / "two_constraint.json", "--verify", 100, "--seed", 7]
    first = run(argv, capsys)
    second = run(argv, capsys)
    assert first == second
    argv = ["family", *[DATA / f"triple_{c}.json" for c in "ABC"], "--seed", 3]
    assert run(argv, capsys) == run(argv, capsys)


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "sdcong", "pair", str(DATA / "b2_A.json"), str(DATA / "b2_B.json")],
        capture_output=True, text=True,
    )
    assert res.returncode == 1 and "B2NotZero" in res.stdout
