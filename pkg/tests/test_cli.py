import io
import json

import pytest

from cloneval.cli import main
from cloneval.features import read_features_csv
from cloneval.models import TrainingSet, load_model_file


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_unknown_subcommand_is_usage_error(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 1
    assert "usage error" in err


def test_missing_required_flag_is_usage_error(capsys):
    code, _, _ = run(capsys, "mutate", "--true", "1")
    assert code == 1


def test_config_file_presets_flags(capsys, tmp_path):
    config = tmp_path / "mutate.json"
    config.write_text(
        json.dumps({"synthesize": 6, "true": 3, "false": 2, "seed": 4, "out": str(tmp_path / "b")})
    )
    code, out, _ = run(capsys, "--config", str(config), "mutate")
    assert code == 0
    assert "true=3 false=2" in out
    # explicit flags beat the config file
    code, out, _ = run(capsys, "--config", str(config), "mutate", "--true", "1",
                       "--out", str(tmp_path / "c"))
    assert code == 0
    assert "true=1" in out


@pytest.fixture(scope="module")
def bench_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("bench")
    code = main(
        ["mutate", "--synthesize", "24", "--true", "30", "--false", "30",
         "--seed", "7", "--out", str(out / "b")]
    )
    assert code == 0
    return out / "b"


def test_mutate_reproducible_stdout(capsys, tmp_path):
    args = ["mutate", "--synthesize", "10", "--true", "5", "--false", "5", "--seed", "3"]
    code1, out1, _ = run(capsys, *args, "--out", str(tmp_path / "one"))
    code2, out2, _ = run(capsys, *args, "--out", str(tmp_path / "two"))
    assert code1 == code2 == 0
    assert out1.replace("one", "x") == out2.replace("two", "x")
    m1 = (tmp_path / "one" / "manifest.csv").read_bytes()
    m2 = (tmp_path / "two" / "manifest.csv").read_bytes()
    assert m1 == m2


def test_full_chain_import_train_validate(capsys, bench_dir, tmp_path):
    store_path = tmp_path / "bench.store"
    code, out, _ = run(
        capsys, "import", "--store", str(store_path),
        "--format", "pairs-directory", "--path", str(bench_dir),
    )
    assert code == 0
    assert "imported=60" in out

    model_path = tmp_path / "model.doc"
    code, out, _ = run(
        capsys, "train", "--store", str(store_path), "--model", "nn", "--k", "5",
        "--seed", "1", "--max-epochs", "150", "--out", str(model_path),
    )
    assert code == 0
    assert "cv_mean_accuracy=" in out
    assert model_path.exists()

    # identical files decide TruePositive at the default threshold
    sample = bench_dir / "pairs" / "tp-0000" / "a.java"
    code, out, _ = run(
        capsys, "validate", "--model", str(model_path),
        "--a", str(sample), "--b", str(sample),
    )
    assert code == 0
    assert "decision=TP" in out

    code, out, _ = run(capsys, "evaluate", "--store", str(store_path), "--model", str(model_path))
    assert code == 0
    assert "roc_auc=" in out and "recommended_gamma=" in out

    code, out, _ = run(capsys, "report", "--store", str(store_path))
    assert code == 0
    assert "line_sim_t1" in out


def test_features_csv_round_trip_into_train(capsys, bench_dir, tmp_path):
    store_path = tmp_path / "rt.store"
    run(capsys, "import", "--store", str(store_path), "--format", "pairs-directory",
        "--path", str(bench_dir))
    csv_path = tmp_path / "features.csv"
    code, out, _ = run(capsys, "features", "--store", str(store_path), "--out", str(csv_path))
    assert code == 0

    from cloneval.store import CloneStore

    store = CloneStore(store_path)
    direct = store.assemble_training_set()
    with open(csv_path, "r", encoding="utf-8", newline="") as stream:
        reread = TrainingSet.from_feature_rows(read_features_csv(stream))
    assert direct.pair_ids == reread.pair_ids
    assert (direct.X == reread.X).all()
    assert (direct.y == reread.y).all()


def test_train_from_features_csv(capsys, bench_dir, tmp_path):
    store_path = tmp_path / "csvtrain.store"
    run(capsys, "import", "--store", str(store_path), "--format", "pairs-directory",
        "--path", str(bench_dir))
    csv_path = tmp_path / "features.csv"
    run(capsys, "features", "--store", str(store_path), "--out", str(csv_path))
    model_path = tmp_path / "csv-model.doc"
    code, out, _ = run(
        capsys, "train", "--features", str(csv_path), "--model", "bayes",
        "--k", "3", "--out", str(model_path),
    )
    assert code == 0
    model = load_model_file(model_path)
    assert model.kind == "naive-bayes-kde"


def test_fica_train_and_evaluate(capsys, bench_dir, tmp_path):
    store_path = tmp_path / "fica.store"
    run(capsys, "import", "--store", str(store_path), "--format", "pairs-directory",
        "--path", str(bench_dir))
    model_path = tmp_path / "fica.doc"
    code, out, _ = run(capsys, "train", "--store", str(store_path), "--model", "fica",
                       "--out", str(model_path))
    assert code == 0 and "model=fica" in out
    code, out, _ = run(capsys, "evaluate", "--store", str(store_path), "--model", str(model_path))
    assert code == 0
    assert "accuracy=" in out


def test_evaluate_artifacts(capsys, bench_dir, tmp_path):
    store_path = tmp_path / "arts.store"
    run(capsys, "import", "--store", str(store_path), "--format", "pairs-directory",
        "--path", str(bench_dir))
    model_path = tmp_path / "model.doc"
    run(capsys, "train", "--store", str(store_path), "--model", "bayes", "--k", "0",
        "--out", str(model_path))
    code, out, _ = run(
        capsys, "evaluate", "--store", str(store_path), "--model", str(model_path),
        "--curves", str(tmp_path / "curve"), "--chi2", "--type-space", str(tmp_path / "space.csv"),
    )
    assert code == 0
    assert (tmp_path / "curve.roc.csv").exists()
    assert (tmp_path / "curve.pr.csv").exists()
    space = (tmp_path / "space.csv").read_text().splitlines()
    assert space[0] == "line_sim_t1,line_sim_t2,line_sim_t3,decision,correct"
    assert len(space) == 61
    assert "chi2 line_sim_t1=" in out


def test_runtime_failure_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "evaluate", "--store", str(tmp_path / "none.store"),
                       "--model", str(tmp_path / "missing.doc"))
    assert code == 2
    assert "error" in err.lower()


def test_label_command_reads_stdin(capsys, tmp_path, monkeypatch):
    from cloneval.fragments import ClonePair, CodeFragment
    from cloneval.store import CloneStore

    store_path = tmp_path / "label.store"
    store = CloneStore(store_path)
    store.add_pair(ClonePair("L1", CodeFragment("int a;"), CodeFragment("int b;")))
    store.add_pair(ClonePair("L2", CodeFragment("int c;"), CodeFragment("int d;")))
    monkeypatch.setattr("sys.stdin", io.StringIO("t\nf\n"))
    code, out, _ = run(capsys, "label", "--store", str(store_path), "--labeler", "me")
    assert code == 0
    assert "labeled=2" in out
    reopened = CloneStore(store_path)
    assert reopened.get("L1").current_label.value == "TP"
    assert reopened.get("L2").current_label.value == "FP"
