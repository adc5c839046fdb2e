from __future__ import annotations

import csv
import json

import pytest

from molcc.cli import main


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def toy_args(data_dir):
    return ["--spec", data_dir / "toy_spec.json", "--model", data_dir / "toy_model.json", "--dict", data_dir / "toy_dict.json"]


def test_featurize_phenols(tmp_path, data_dir, capsys):
    vals = tmp_path / "v.csv"
    vals.write_text("id,logp\ncatechol,0.88\nresorcinol,0.8\nhydroquinone,0.59\n")
    rc = run("featurize", "--sdf", data_dir / "phenols.sdf", "--values", vals, "--dict", tmp_path / "d.json", "--features", tmp_path / "f.csv")
    assert rc == 0
    assert "molecules: 3" in capsys.readouterr().out
    lines = list(csv.reader((tmp_path / "f.csv").read_text().splitlines()))
    assert [ln[0] for ln in lines] == ["id", "catechol", "resorcinol", "hydroquinone"]
    assert (tmp_path / "f.skipped.csv").read_text() == "id,reason\n"
    d = json.loads((tmp_path / "d.json").read_text())
    assert d["columns"] == lines[0][1:]


def test_featurize_input_errors(tmp_path, data_dir, capsys):
    rc = run("featurize", "--sdf", tmp_path / "nope.sdf", "--values", data_dir / "demo_values.csv", "--dict", tmp_path / "d", "--features", tmp_path / "f")
    assert rc == 1
    assert "not found" in capsys.readouterr().err
    vals = tmp_path / "v.csv"
    vals.write_text("id,v\nnot_a_record,1\n")
    rc = run("featurize", "--sdf", data_dir / "phenols.sdf", "--values", vals, "--dict", tmp_path / "d", "--features", tmp_path / "f")
    assert rc == 1


def test_train_fixed_lambda(tmp_path, data_dir, capsys):
    run("featurize", "--sdf", data_dir / "demo.sdf", "--values", data_dir / "demo_values.csv", "--dict", tmp_path / "d.json", "--features", tmp_path / "f.csv")
    rc = run("train", "--features", tmp_path / "f.csv", "--values", data_dir / "demo_values.csv", "--lambda", "0.01", "--seed", 3, "--model", tmp_path / "m.json")
    assert rc == 0
    model = json.loads((tmp_path / "m.json").read_text())
    assert model["lambda"] == 0.01 and model["seed"] == 3 and model["n_train"] == 29
    cv = json.loads((tmp_path / "m.cv.json").read_text())
    assert len(cv["per_fold_r2"]) == 50 and cv["median_r2"] == model["cv_median_r2"]
    assert "lambda: 0.01" in capsys.readouterr().out


def test_train_missing_values(tmp_path, data_dir):
    run("featurize", "--sdf", data_dir / "demo.sdf", "--values", data_dir / "demo_values.csv", "--dict", tmp_path / "d.json", "--features", tmp_path / "f.csv")
    vals = tmp_path / "v.csv"
    vals.write_text("\n".join((data_dir / "demo_values.csv").read_text().splitlines()[:5]) + "\n")
    assert run("train", "--features", tmp_path / "f.csv", "--values", vals, "--lambda", "0.1", "--model", tmp_path / "m.json") == 1
    assert run("train", "--features", tmp_path / "f.csv", "--values", data_dir / "demo_values.csv", "--lambda-grid", "a,b", "--model", tmp_path / "m.json") == 1


def test_infer_toy(tmp_path, toy_args, capsys):
    rc = run("infer", *toy_args, "--lp", tmp_path / "t.lp", "--varmap", tmp_path / "t.json")
    out = capsys.readouterr().out
    assert rc == 0
    assert out.startswith("#V=") and "#C=" in out and "cycle_assignment=" in out
    vm = json.loads((tmp_path / "t.json").read_text())
    n_vars = int(out.split()[0].split("=")[1])
    assert len(vm["variables"]) == n_vars


def test_infer_empty_target_range(tmp_path, toy_args, capsys):
    rc = run("infer", *toy_args, "--ylb", 5, "--yub", 1, "--lp", tmp_path / "t.lp")
    assert rc == 1
    assert "empty" in capsys.readouterr().err


def test_infer_infeasible_spec(tmp_path, data_dir, capsys):
    obj = json.loads((data_dir / "toy_spec.json").read_text())
    obj["bounds"]["n"] = [30, 20]
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps(obj))
    rc = run("infer", "--spec", spec, "--model", data_dir / "toy_model.json", "--lp", tmp_path / "t.lp")
    assert rc == 1
    assert "infeasible bound n" in capsys.readouterr().err


def test_decode_verify_toy(tmp_path, data_dir, toy_args):
    rc = run("decode-verify", *toy_args, "--solution", data_dir / "toy_solution.txt", "--out", tmp_path / "g.sdf")
    assert rc == 0
    report = json.loads((tmp_path / "g.report.json").read_text())
    assert report["passed"]
    assert (tmp_path / "g.sdf").read_text().rstrip().endswith("$$$$")


def test_decode_verify_corrupted_solution(tmp_path, data_dir, toy_args, capsys):
    lines = [ln for ln in (data_dir / "toy_solution.txt").read_text().splitlines() if not ln.startswith("xx_u0_x1 ")]
    bad = tmp_path / "s.txt"
    bad.write_text("\n".join(lines) + "\n")
    assert run("decode-verify", *toy_args, "--solution", bad) == 1
    assert "xx_u0_x1" in capsys.readouterr().err


def test_decode_verify_failed_check(tmp_path, data_dir, toy_args, capsys):
    # the bundled solution predicts 4.5; a target range that excludes it must fail verification
    rc = run("decode-verify", *toy_args, "--ylb", 5, "--yub", 6, "--solution", data_dir / "toy_solution.txt", "--report", tmp_path / "r.json")
    assert rc == 2
    assert "prediction_in_range" in capsys.readouterr().err
    report = json.loads((tmp_path / "r.json").read_text())
    assert [c["check"] for c in report["checks"] if not c["passed"]] == ["prediction_in_range"]
