import csv
import json
import warnings

import numpy as np
import pytest

from ardt.cli import main
from ardt.dataset import load_csv
from ardt.methods import build_method
from ardt.synth import SynthSpec, generate, write_csv


@pytest.fixture(autouse=True)
def _quiet_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        yield


def run(argv):
    return main([str(a) for a in argv])


def make_data_csv(tmp_path, name, seed, n=240, mu=0.2):
    path = tmp_path / name
    write_csv(generate(SynthSpec(n=n, m=3, mu=mu, separation=3.0, seed=seed)), path)
    return path


def write_config(tmp_path, body):
    path = tmp_path / "run.ini"
    path.write_text(body)
    return path


def bench_config(tmp_path, methods="CDT, LogR+TH", k=3, seed=5):
    a = make_data_csv(tmp_path, "a.csv", seed=1)
    b = make_data_csv(tmp_path, "b.csv", seed=2, mu=0.15)
    return write_config(tmp_path, f"""
[run]
methods = {methods}
k = {k}
seed = {seed}
output_dir = {tmp_path / "out"}

[dataset.alpha]
path = {a}
format = csv
label_column = label
positive_label = 1

[dataset.beta]
path = {b}
format = csv
label_column = label
positive_label = 1
""")


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# ---------------------------------------------------------------------------
# generate / dump-curves


def test_generate_round_trips(tmp_path):
    out = tmp_path / "gen.csv"
    assert run(["generate", "--n", 500, "--m", 3, "--mu", 0.1, "--seed", 4,
                "--out", out]) == 0
    d = load_csv(out, "label", "1")
    assert d.n == 500
    assert int(d.labels.sum()) == 50


def test_generate_daily_blocks(tmp_path):
    out = tmp_path / "daily.csv"
    assert run(["generate", "--days", 4, "--n", 100, "--m", 3, "--boundary", "xor",
                "--seed", 1, "--out", out]) == 0
    assert load_csv(out, "label", "1").n == 400


def test_dump_curves(tmp_path):
    out = tmp_path / "curves.csv"
    assert run(["dump-curves", "--alphas", "0,0.5,1,2", "--p-count", 41,
                "--out", out]) == 0
    rows = read_rows(out)
    assert rows[0] == ["alpha", "p", "renyi_entropy", "shannon_entropy"]
    body = [(float(a), float(p), float(hr), float(hs)) for a, p, hr, hs in rows[1:]]
    assert len(body) == 4 * 41
    assert all(0.0 <= hr <= 1.0 and 0.0 <= hs <= 1.0 for _, _, hr, hs in body)
    assert any(row == (1.0, 0.5, 1.0, 1.0) for row in body)
    for a, _, hr, hs in body:
        if a == 1.0:
            assert abs(hr - hs) <= 1e-9


# ---------------------------------------------------------------------------
# benchmark


def test_benchmark_writes_reports(tmp_path):
    config = bench_config(tmp_path)
    assert run(["benchmark", "--config", config]) == 0
    out = tmp_path / "out"
    rows = read_rows(out / "fscore_table.csv")
    assert rows[0] == ["dataset", "CDT", "CDT rank", "LogR+TH", "LogR+TH rank"]
    assert [r[0] for r in rows[1:]] == ["alpha", "beta"]
    for row in rows[1:]:
        scores = [float(v) for v in row[1::2]]
        assert all(0.0 <= s <= 1.0 for s in scores)
    ranks = read_rows(out / "fscore_ranks.csv")
    assert ranks[-1][0] == "average"
    stats = json.loads((out / "friedman_holm.json").read_text())
    assert "fscore" in stats["metrics"]
    assert stats["metrics"]["fscore"]["degrees_of_freedom"] == 1
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["k"] == 3
    assert manifest["failures"] == []
    assert len(manifest["cells"]) == 4
    for cell in manifest["cells"].values():
        assert len(cell["folds"]) == 3


def test_benchmark_reproducible_byte_identical(tmp_path):
    config = bench_config(tmp_path)
    assert run(["benchmark", "--config", config]) == 0
    first = {
        name: (tmp_path / "out" / name).read_bytes()
        for name in ("fscore_table.csv", "acc_table.csv", "fscore_ranks.csv", "acc_ranks.csv")
    }
    assert run(["benchmark", "--config", config]) == 0
    for name, blob in first.items():
        assert (tmp_path / "out" / name).read_bytes() == blob


def test_benchmark_unknown_method_is_config_error(tmp_path, capsys):
    config = bench_config(tmp_path, methods="CDT, Slartibartfast")
    assert run(["benchmark", "--config", config]) == 1
    assert "Slartibartfast" in capsys.readouterr().err


def test_benchmark_missing_dataset_partial_results(tmp_path):
    a = make_data_csv(tmp_path, "a.csv", seed=1)
    config = write_config(tmp_path, f"""
[run]
methods = CDT
k = 3
seed = 1
output_dir = {tmp_path / "out"}

[dataset.alpha]
path = {a}
label_column = label
positive_label = 1

[dataset.gone]
path = {tmp_path / "missing.csv"}
label_column = label
positive_label = 1
""")
    assert run(["benchmark", "--config", config]) == 2
    rows = read_rows(tmp_path / "out" / "fscore_table.csv")
    cells = {r[0]: r[1] for r in rows[1:]}
    assert cells["gone"] == "NA"
    assert cells["alpha"] != "NA"
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["failures"][0]["dataset"] == "gone"


def test_benchmark_env_output_dir(tmp_path, monkeypatch):
    config = bench_config(tmp_path, methods="CDT")
    env_out = tmp_path / "env_out"
    monkeypatch.setenv("ARDT_OUTPUT_DIR", str(env_out))
    assert run(["benchmark", "--config", config]) == 0
    assert (env_out / "manifest.json").exists()


def test_benchmark_unknown_config_key(tmp_path):
    config = write_config(tmp_path, "[run]\nmethods = CDT\nbogus_key = 3\n")
    assert run(["benchmark", "--config", config]) == 1


# ---------------------------------------------------------------------------
# train / predict


def test_train_predict_round_trip(tmp_path):
    data = make_data_csv(tmp_path, "train.csv", seed=3)
    model_path = tmp_path / "model.json"
    assert run(["train", "--data", data, "--label-column", "label",
                "--positive-label", "1", "--method", "ARDT", "--seed", "11",
                "--out", model_path]) == 0

    doc = json.loads(model_path.read_text())
    assert doc["model"] == "decision-tree"

    def splits(node):
        if node["type"] == "split":
            yield node
            yield from splits(node["left"])
            yield from splits(node["right"])

    assert all(s["alpha_used"] is not None for s in splits(doc["root"]))

    pred_path = tmp_path / "pred.csv"
    assert run(["predict", "--model", model_path, "--data", data,
                "--label-column", "label", "--out", pred_path]) == 0
    got = np.array([int(r[0]) for r in read_rows(pred_path)[1:]])

    d = load_csv(data, "label", "1")
    expected = build_method("ARDT").fit(d, 11).predict_matrix(d.features)
    assert np.array_equal(got, expected)


def test_train_linear_and_ensemble_models(tmp_path):
    data = make_data_csv(tmp_path, "train2.csv", seed=4)
    for method, kind in (("LogR+TH", "linear"), ("EAT", "ensemble")):
        out = tmp_path / f"{kind}.json"
        assert run(["train", "--data", data, "--label-column", "label",
                    "--positive-label", "1", "--method", method, "--seed", "0",
                    "--out", out]) == 0
        assert json.loads(out.read_text())["model"] == kind
        pred = tmp_path / f"{kind}_pred.csv"
        assert run(["predict", "--model", out, "--data", data,
                    "--label-column", "label", "--out", pred]) == 0
        assert len(read_rows(pred)) == 241


def test_predict_tampered_model(tmp_path, capsys):
    data = make_data_csv(tmp_path, "t.csv", seed=5)
    model_path = tmp_path / "m.json"
    run(["train", "--data", data, "--label-column", "label", "--positive-label", "1",
         "--method", "CDT", "--seed", "0", "--out", model_path])
    doc = json.loads(model_path.read_text())
    doc["root"].pop("counts", None)
    model_path.write_text(json.dumps(doc))
    pred = tmp_path / "p.csv"
    assert run(["predict", "--model", model_path, "--data", data,
                "--label-column", "label", "--out", pred]) == 1
    assert "counts" in capsys.readouterr().err


def test_predict_arity_mismatch(tmp_path, capsys):
    data = make_data_csv(tmp_path, "t4.csv", seed=6)
    model_path = tmp_path / "m4.json"
    run(["train", "--data", data, "--label-column", "label", "--positive-label", "1",
         "--method", "CDT", "--seed", "0", "--out", model_path])
    narrow = tmp_path / "narrow.csv"
    rows = read_rows(data)
    with open(narrow, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in rows:
            writer.writerow(row[:2])
    assert run(["predict", "--model", model_path, "--data", narrow, "--out", pred_out(tmp_path)]) == 1
    assert "feature columns" in capsys.readouterr().err


def pred_out(tmp_path):
    return tmp_path / "never.csv"
