import json

import numpy as np
import pytest

from vandervolt.cli import main, parse_basis_spec, read_table


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def nodes4(tmp_path):
    path = tmp_path / "nodes.csv"
    path.write_text("# four nodes\nx,y\n0.1,0.2\n0.9,0.1\n0.5,0.8\n0.3,0.4\n")
    return path


def test_select_basis(capsys, nodes4):
    code, out, _ = run(capsys, "select-basis", str(nodes4), "--basis", "monomial:degree=2")
    assert code == 0
    res = json.loads(out)
    assert len(res["row_indices"]) == 4
    assert set(res["row_indices"]) <= set(range(1, 7))
    assert res["dismissed"] is False


def test_select_basis_square(capsys, tmp_path):
    path = tmp_path / "n.csv"
    path.write_text("0,0\n1,0\n0,1\n")
    code, out, _ = run(capsys, "select-basis", str(path), "--basis", "monomial:degree=1")
    assert code == 0 and json.loads(out)["row_indices"] == [1, 2, 3]


def test_select_basis_with_values(capsys, tmp_path):
    nodes = tmp_path / "n.csv"
    nodes.write_text("0,0\n1,0\n0,1\n")
    values = tmp_path / "f.csv"
    values.write_text("1\n3\n4\n")  # f = 1 + 2 x1 + 3 x2
    code, out, _ = run(capsys, "select-basis", str(nodes), "--basis", "monomial:degree=1",
                       "--values", str(values))
    assert code == 0
    np.testing.assert_allclose(json.loads(out)["coefficients"], [1, 2, 3], atol=1e-12)


@pytest.mark.parametrize("method", ["maxvol", "maxvol-exhaustive", "maxminsv"])
def test_collinear_exit_3(capsys, tmp_path, method):
    path = tmp_path / "line.csv"
    path.write_text("0,0\n0.5,0.5\n1,1\n")
    code, out, _ = run(capsys, "select-basis", str(path), "--basis", "monomial:degree=1",
                       "--method", method)
    assert code == 3
    assert json.loads(out)["dismissed"] is True


def test_parse_error_has_line_number(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0,0\n1,zz\n")
    code, _, err = run(capsys, "select-basis", str(path))
    assert code == 2
    assert "bad.csv:2" in err


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, _ = run(capsys, "select-basis", str(tmp_path / "nope.csv"))
    assert code == 2


def test_read_table_ragged(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("1,2\n3\n")
    with pytest.raises(ValueError, match="r.csv:2"):
        read_table(path)


def test_parse_basis_spec():
    assert len(parse_basis_spec("monomial:degree=3", 2)) == 10
    assert len(parse_basis_spec("chebyshev:degree=1", 3)) == 4
    assert len(parse_basis_spec("smolyak:k=2", 2)) == 13
    for bad in ["spline:degree=2", "monomial:k=2", "monomial:degree=x", "monomial:degree"]:
        with pytest.raises(ValueError):
            parse_basis_spec(bad, 2)


def test_lebesgue_grid(capsys):
    code, out, _ = run(capsys, "lebesgue", "--d", "2", "--k", "2")
    res = json.loads(out)
    assert code == 0
    assert res["n"] == 13
    assert res["lambda_discrete"] == pytest.approx(3.98046875, rel=1e-8)
    assert res["lambda_discrete"] <= res["bound_sv"] <= res["bound_det"]


def test_lebesgue_node_file(capsys, nodes4):
    code, out, _ = run(capsys, "lebesgue", str(nodes4), "--method", "maxvol-exhaustive")
    res = json.loads(out)
    assert code == 0 and res["lambda_discrete"] >= 1.0


def test_lebesgue_needs_input(capsys):
    code, _, _ = run(capsys, "lebesgue")
    assert code == 2


def test_sparse_grid_dump(capsys, tmp_path):
    code, out, _ = run(capsys, "sparse-grid", "--d", "2", "--k", "2")
    lines = out.split("\r\n")
    assert code == 0
    assert lines[:3] == ["i,x1,x2", "1,-1,0", "2,-0.707106781,0"]
    assert len([line for line in lines if line]) == 14
    nodes, basis = tmp_path / "g.csv", tmp_path / "b.txt"
    run(capsys, "sparse-grid", "--d", "3", "--k", "3", "--out", str(nodes), "--basis-out", str(basis))
    assert len(nodes.read_bytes().split(b"\r\n")) == 71
    assert basis.read_text().splitlines()[-1] == "69 chebyshev 2,2,2"


def test_random_nodes_cli(capsys, tmp_path):
    prefix = tmp_path / "run"
    code, out, _ = run(capsys, "experiment", "random-nodes", "--n", "4", "--degree", "2",
                       "--trials", "5", "--seed", "3", "--out", str(prefix))
    assert code == 0
    assert json.loads(out)["trials"] == 5
    first = (tmp_path / "run_trials.csv").read_bytes()
    run(capsys, "experiment", "random-nodes", "--n", "4", "--degree", "2",
        "--trials", "5", "--seed", "3", "--out", str(prefix))
    assert (tmp_path / "run_trials.csv").read_bytes() == first
    assert (tmp_path / "run_hist.csv").exists()


def test_random_nodes_case_preset(capsys, tmp_path):
    code, out, _ = run(capsys, "experiment", "random-nodes", "--case", "i", "--trials", "2")
    res = json.loads(out)
    assert code == 0 and [r["n"] for r in res] == [4, 5]


def test_incomplete_grid_cli(capsys, tmp_path):
    out_path = tmp_path / "curve.csv"
    code, out, _ = run(capsys, "experiment", "incomplete-grid", "--d", "2", "--k", "2",
                       "--out", str(out_path))
    assert code == 0
    assert json.loads(out)["local_minima"] == [17, 21, 25, 27]
    assert len(out_path.read_text().splitlines()) == 18
