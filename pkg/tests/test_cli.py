import csv
import io
import json

import numpy as np
import pytest

from slicefock.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main
from slicefock.fock import basis_phi
from slicefock.quaternion import Quaternion
from slicefock.transforms import HermiteExpansion, hermite_h


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tabulate_classical_betas(capsys):
    code, out, _ = run(capsys, "tabulate", "--alpha", "-0.5", "--degree", "5")
    assert code == EXIT_OK
    table = json.loads(out)
    beta = [row[1] for row in table["rows"]]
    assert beta == [1.0, 1.0, 2.0, 6.0, 24.0, 120.0]


def test_tabulate_moment_row(capsys):
    code, out, _ = run(capsys, "tabulate", "--alpha", "0", "--degree", "2")
    table = json.loads(out)
    cols = table["columns"]
    row1 = dict(zip(cols, table["rows"][1]))
    assert row1["E_nn_closed"] == 4.0
    assert row1["E_nn_quad"] == pytest.approx(4.0, rel=1e-9)


def test_tabulate_csv_and_json_agree(capsys):
    _, js, _ = run(capsys, "tabulate", "--alpha", "1.3", "--degree", "6")
    _, cs, _ = run(capsys, "tabulate", "--alpha", "1.3", "--degree", "6", "--format", "csv")
    table = json.loads(js)
    assert "\r\n" in cs
    rows = list(csv.reader(io.StringIO(cs)))
    assert rows[0] == table["columns"]
    for text_row, row in zip(rows[1:], table["rows"]):
        assert [float(v) for v in text_row] == [float(v) for v in row]


def test_tabulate_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "tabulate", "--degree", "4", "-o", str(a))[0] == EXIT_OK
    assert run(capsys, "tabulate", "--degree", "4", "-o", str(b))[0] == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [["--degree", "41"], ["--alpha", "-0.7"], ["--tol", "0"], ["--format", "xml"]])
def test_bad_arguments_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(["tabulate", *argv])
    assert exc.value.code == EXIT_INPUT


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_transform_T_of_h2(capsys, tmp_path):
    a = 0.5
    path = write(tmp_path, "h2.json", json.loads(HermiteExpansion.basis(2, a).to_json()))
    code, out, _ = run(capsys, "transform", path, "--point", "0.5")
    assert code == EXIT_OK
    value = json.loads(out)["value"]
    assert value == pytest.approx(basis_phi(2, a)(Quaternion(0.5)).array.tolist(), abs=1e-15)
    code, out, _ = run(capsys, "transform", path, "--point", "0.5", "--method", "quad")
    assert json.loads(out)["value"] == pytest.approx(value, abs=1e-7)


def test_transform_zero_input(capsys, tmp_path):
    path = write(tmp_path, "zero.json", {"alpha": 0.0, "coeffs": [[0, 0, 0, 0], [0, 0, 0, 0]]})
    for op in ("T", "Tinv", "dunkl"):
        code, out, _ = run(capsys, "transform", path, "--op", op, "--point", "0.3")
        assert code == EXIT_OK and json.loads(out)["value"] == [0.0, 0.0, 0.0, 0.0]


def test_transform_inverse_of_series(capsys, tmp_path):
    a = 0.5
    series = basis_phi(3, a).coeffs.tolist()
    path = write(tmp_path, "phi3.json", series)
    ref = hermite_h(3, 0.8, a)
    for method, tol in (("coeff", 1e-14), ("quad", 1e-6)):
        code, out, _ = run(capsys, "transform", path, "--op", "Tinv", "--point", "0.8",
                           "--alpha", str(a), "--method", method, "--unit", "0,1,1")
        assert code == EXIT_OK
        v = json.loads(out)["value"]
        assert abs(v[0] - ref) < tol and max(map(abs, v[1:])) < tol


def test_transform_dunkl_paths_agree(capsys, tmp_path):
    path = write(tmp_path, "phi.json", {"alpha": 1.3, "coeffs": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 2]]})
    _, a, _ = run(capsys, "transform", path, "--op", "dunkl", "--point", "0.7", "--unit", "k")
    _, b, _ = run(capsys, "transform", path, "--op", "dunkl", "--point", "0.7", "--unit", "k", "--method", "quad")
    assert np.allclose(json.loads(a)["value"], json.loads(b)["value"], atol=1e-9)


def test_transform_csv(capsys, tmp_path):
    path = write(tmp_path, "h0.json", {"alpha": 0.0, "coeffs": [[1, 0, 0, 0]]})
    code, out, _ = run(capsys, "transform", path, "--point", "0,0,0,0", "--format", "csv")
    assert code == EXIT_OK and out.splitlines()[0] == "x0,x1,x2,x3"
    assert float(out.splitlines()[1].split(",")[0]) == 1.0


def test_malformed_json_exits_2_with_position(capsys, tmp_path):
    path = write(tmp_path, "bad.json", '{\n  "alpha": 0.5,\n  "coeffs": [[1, 0, 0, 0]\n')
    code, _, err = run(capsys, "transform", path)
    assert code == EXIT_INPUT
    assert f"{path}:4:" in err or f"{path}:3:" in err


@pytest.mark.parametrize("content", ['{"alpha": 0.5}', '[[1, 2, 3]]', '"text"'])
def test_invalid_input_shapes_exit_2(capsys, tmp_path, content):
    path = write(tmp_path, "x.json", content)
    assert run(capsys, "transform", path)[0] == EXIT_INPUT


def test_missing_file_and_real_point_rules(capsys, tmp_path):
    assert run(capsys, "transform", str(tmp_path / "missing.json"))[0] == EXIT_INPUT
    path = write(tmp_path, "h0.json", {"alpha": 0.0, "coeffs": [[1, 0, 0, 0]]})
    assert run(capsys, "transform", path, "--op", "dunkl", "--point", "0,1,0,0")[0] == EXIT_INPUT


def test_quad_config(capsys, tmp_path):
    good = write(tmp_path, "q.json", {"radial_panels": 8, "tol": 1e-9})
    code, out, _ = run(capsys, "verify", "--only", "mellin_identity", "--quad-config", good)
    assert code == EXIT_OK and json.loads(out)["config"]["quadrature"]["radial_panels"] == 8
    bad = write(tmp_path, "r.json", {"panels": 8})
    assert run(capsys, "verify", "--only", "mellin_identity", "--quad-config", bad)[0] == EXIT_INPUT


def test_verify_report_schema(capsys):
    code, out, err = run(capsys, "verify", "--only", "reproducing_property", "operator_identities")
    assert code == EXIT_OK and err == ""
    report = json.loads(out)
    assert set(report) == {"config", "passed", "failed", "checks"}
    assert set(report["config"]) == {"alpha", "alpha_grid", "degree", "tol_override", "seed", "quadrature"}
    assert report["passed"] is True and report["failed"] == []
    names = [c["name"] for c in report["checks"]]
    assert names == ["reproducing_property", "operator_identities"]
    for c in report["checks"]:
        assert set(c) == {"name", "passed", "residual", "tol", "detail"}
        assert c["residual"] < c["tol"]


def test_verify_forced_failure(capsys):
    code, out, err = run(capsys, "verify", "--only", "mellin_identity", "reproducing_property", "--tol", "1e-20")
    assert code == EXIT_FAIL
    report = json.loads(out)
    assert not report["passed"] and "mellin_identity" in report["failed"]
    assert "mellin_identity" in err


def test_verify_is_byte_identical(capsys):
    argv = ["verify", "--only", "mellin_identity", "generating_function", "evaluation_bound"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


@pytest.mark.parametrize("seed", ["1", "7"])
def test_verify_seed_does_not_change_status(capsys, seed):
    code, out, _ = run(capsys, "verify", "--seed", seed, "--only", "reproducing_property",
                       "evaluation_bound", "generating_function", "operator_identities")
    assert code == EXIT_OK and json.loads(out)["passed"]


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--only", "mellin_identity", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["check", "status", "residual", "tol"]
    assert rows[1][:2] == ["mellin_identity", "pass"]
