import csv
import json

import pytest

from temop import cli
from temop.data_io import generate_synthetic, load_csv, load_model, write_csv
from temop.infer import predict_proba
from temop.train import train


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def rw_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "rw.csv"
    write_csv(generate_synthetic("random_walk", 4100, 42), path)
    return path


@pytest.fixture(scope="module")
def small_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "small.csv"
    write_csv(generate_synthetic("random_walk", 200, 5), path)
    return path


def test_train_reports_q(capsys, tmp_path, rw_csv):
    code, out, _ = run(capsys, "train", rw_csv, tmp_path / "m.json")
    assert code == 0
    expected = train(load_csv(rw_csv))
    assert out.splitlines()[0] == f"q={expected.q}"
    rows = out.splitlines()[2:]
    assert len(rows) == expected.q
    assert rows[-1].split("\t") == [str(expected.q), str(len(expected.lag_models[-1].subsets)),
                                    str(expected.lag_models[-1].min_support)]
    assert load_model(tmp_path / "m.json") == expected


def test_train_too_short(capsys, tmp_path):
    write_csv(generate_synthetic("trending", 10, 0), tmp_path / "ten.csv")
    code, _, err = run(capsys, "train", tmp_path / "ten.csv", tmp_path / "m.json")
    assert code == cli.EXIT_INSUFFICIENT
    assert "at least" in err


def test_train_unreadable_path(capsys, tmp_path):
    code, _, err = run(capsys, "train", tmp_path / "missing.csv", tmp_path / "m.json")
    assert code == cli.EXIT_IO
    assert "missing.csv" in err


@pytest.fixture
def model_q3(tmp_path, small_csv, capsys):
    path = tmp_path / "m.json"
    assert run(capsys, "train", small_csv, path, "--m", 5, "--lag-cap", 3)[0] == 0
    model = load_model(path)
    assert model.q == 3
    return path, model


def test_predict_one_line(capsys, model_q3):
    path, model = model_q3
    code, out, _ = run(capsys, "predict", path, "--values", "100,101,100.5")
    assert code == 0
    lines = out.splitlines()
    expected = predict_proba(model, [100, 101, 100.5]).p_up
    assert lines[0] == f"p_up={expected:.9g}"
    assert lines[1] in ("class=+1", "class=-1")


def test_predict_short_history_names_q(capsys, model_q3):
    path, _ = model_q3
    code, _, err = run(capsys, "predict", path, "--values", "100,101")
    assert code == cli.EXIT_INSUFFICIENT
    assert "q=3" in err


def test_predict_verbose_rows_sum_to_totals(capsys, model_q3, small_csv):
    path, _ = model_q3
    code, out, _ = run(capsys, "predict", path, "--history", small_csv, "-v")
    assert code == 0
    lines = out.splitlines()
    rows = [l.split("\t") for l in lines[3:6]]
    totals = {l.split("=")[0]: float(l.split("=")[1]) for l in lines[6:8]}
    assert sum(float(r[5]) for r in rows) == pytest.approx(totals["total_plus"], rel=1e-8)
    assert sum(float(r[6]) for r in rows) == pytest.approx(totals["total_minus"], rel=1e-8)


def test_predict_bad_model_file(capsys, tmp_path):
    (tmp_path / "bad.json").write_text("{not json")
    code, _, _ = run(capsys, "predict", tmp_path / "bad.json", "--values", "1,2,3")
    assert code == cli.EXIT_MODEL_FILE


def test_evaluate_table(capsys, rw_csv):
    code, out, _ = run(capsys, "evaluate", rw_csv)
    assert code == 0
    header, row = out.splitlines()
    assert header.split("\t") == ["series", "q", "ACC", "F1", "AUC", "SR", "PR_AUC"]
    assert all(v != "nan" for v in row.split("\t"))


def test_evaluate_json(capsys, tmp_path, rw_csv):
    code, _, _ = run(capsys, "evaluate", rw_csv, "--format", "json", "-o", tmp_path / "r.json")
    assert code == 0
    data = json.loads((tmp_path / "r.json").read_text())
    for key in ("acc", "f1", "roc_auc", "pr_auc", "sr"):
        assert isinstance(data[key], float)


def test_evaluate_csv(capsys, tmp_path, rw_csv):
    code, _, _ = run(capsys, "evaluate", rw_csv, "--format", "csv", "-o", tmp_path / "p.csv")
    assert code == 0
    rows = list(csv.DictReader((tmp_path / "p.csv").open()))
    assert len(rows) == 300
    assert list(rows[0]) == ["index", "p_up", "label", "realized_return"]


def test_evaluate_no_validations(capsys, tmp_path, rw_csv):
    code, _, _ = run(capsys, "evaluate", rw_csv, "--no-validations", "--format", "json",
                     "-o", tmp_path / "r.json")
    assert code == 0
    meta = json.loads((tmp_path / "r.json").read_text())["model_meta"]
    assert meta["split"]["use_validations"] is False
    assert meta["test_start"] == 3030


def test_synth(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "synth", "trending", 100, a, "--seed", 4)[0] == 0
    assert run(capsys, "synth", "trending", 100, b, "--seed", 4)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    values = load_csv(a).values
    assert len(values) == 100 and all(values[1:] > values[:-1])


@pytest.mark.parametrize("argv", [("synth", "trending", "0", "x.csv"), ("synth", "sine", "10", "x.csv")])
def test_synth_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(list(argv))
    assert exc.value.code == cli.EXIT_USAGE
