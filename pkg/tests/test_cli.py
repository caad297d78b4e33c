import json

from parabolic_rigidity.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_path_geometry(capsys):
    code, out, _ = run(capsys, "check", "--algebra", "sl(4,R)", "--sigma", "1,2", "--mu", "2,1",
                       "--expect-pr", "j1=1, j2=-1")
    assert code == 0
    assert "PR:" in out


def test_check_expect_mismatch(capsys):
    code, _, err = run(capsys, "check", "--algebra", "A2", "--sigma", "1,2", "--mu", "1,2", "--expect-pr", "j1=1")
    assert code == 1
    assert "expected PR" in err


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", "--algebra", "A3", "--sigma", "1", "--mu", "1,2", "--json")
    assert code == 0
    assert json.loads(out)["sigma"] == [1]


def test_invalid_mu(capsys):
    code, _, err = run(capsys, "check", "--algebra", "A3", "--sigma", "1", "--mu", "1,x")
    assert code == 2
    assert "bad node" in err or "pairs" in err


def test_unknown_component(capsys):
    code, _, err = run(capsys, "check", "--algebra", "A3", "--sigma", "1", "--mu", "3,3")
    assert code == 2


def test_classify_csv(capsys, tmp_path):
    out = tmp_path / "a.csv"
    code, _, err = run(capsys, "classify", "--family", "A", "--max-rank", "2", "--format", "csv", "--out", str(out))
    assert code == 0
    assert "records" in err
    assert out.read_text().count("\n") >= 2


def test_rank_guard(capsys):
    code, _, err = run(capsys, "classify", "--family", "A", "--max-rank", "9")
    assert code == 3


def test_unknown_family(capsys):
    code, _, _ = run(capsys, "classify", "--family", "Z")
    assert code == 2


def test_tables_show(capsys):
    code, out, _ = run(capsys, "tables", "show", "7")
    assert code == 0
    assert "su(2,2)" in out


def test_tables_diff_needs_source(capsys):
    code, _, _ = run(capsys, "tables", "diff")
    assert code == 2


def test_tables_diff_from_run(capsys, tmp_path):
    path = tmp_path / "run.json"
    assert run(capsys, "classify", "--family", "A", "--max-rank", "2", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "tables", "diff", "--run", str(path), "--max-rank", "2")
    # the Borel rows of sl(3) are a known disagreement
    assert code == 1
    assert "missing" in out.lower()


def test_bch_eval(capsys, tmp_path):
    src = tmp_path / "y.json"
    src.write_text(json.dumps({"s": [1, -1], "y": [{"root": [0, 1], "coeff": "1"}]}))
    code, out, _ = run(capsys, "bch", "eval", "--grading", "A2:1,2", "--op", "defect", "--input", str(src))
    assert code == 0
    assert "defect" in json.loads(out)
    code, out, _ = run(capsys, "bch", "eval", "--grading", "A2:1,2", "--op", "invariantize", "--input", str(src))
    assert code == 0
    assert json.loads(out)["final_zero"] is True


def test_bch_obstruction(capsys, tmp_path):
    src = tmp_path / "y.json"
    # multigrade (1,0) has eigenvalue 1 under s = (1,-1)
    src.write_text(json.dumps({"s": [1, -1], "y": [{"root": [1, 0], "coeff": "1"}]}))
    code, _, err = run(capsys, "bch", "eval", "--grading", "A2:1,2", "--op", "invariantize", "--input", str(src))
    assert code == 1
    assert "no invariant normalization" in err


def test_bad_grading(capsys, tmp_path):
    src = tmp_path / "y.json"
    src.write_text("{}")
    code, _, _ = run(capsys, "bch", "eval", "--grading", "A2", "--op", "defect", "--input", str(src))
    assert code == 2


def test_oracle_h2(capsys):
    code, out, _ = run(capsys, "oracle", "h2", "--algebra", "A2", "--sigma", "1")
    assert code == 0
    assert "MISMATCH" not in out


def test_oracle_guard(capsys):
    code, _, _ = run(capsys, "oracle", "h2", "--algebra", "A4", "--sigma", "1")
    assert code == 3
