"""End-to-end command-line pipeline: artifacts, manifests, exit codes,
and byte-level determinism."""

from __future__ import annotations

import csv
import json

import pytest

from humor_engine import (
    ProxyFeatureSpec,
    TheoryConfig,
    read_corpus,
    read_feature_matrix,
    write_labels,
    write_theory_config,
)
from humor_engine.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def toy_config(name: str) -> TheoryConfig:
    channel = {"alpha": "anger", "beta": "optimism"}[name]
    return TheoryConfig(
        name=name,
        features=(
            ProxyFeatureSpec(
                channel=channel,
                calculator="max_change",
                params={},
                hypothesis="a sudden jump",
            ),
            ProxyFeatureSpec(
                channel=channel,
                calculator="linear_fit",
                params={"attr": "slope"},
                hypothesis="a steady climb",
            ),
            ProxyFeatureSpec(
                channel=channel,
                calculator="abs_energy",
                params={},
                hypothesis="overall intensity",
            ),
        ),
    )


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """Run the whole pipeline once into a shared directory."""
    root = tmp_path_factory.mktemp("pipeline")
    paths = {
        "corpus": root / "corpus.jsonl",
        "alpha_cfg": root / "alpha.yaml",
        "beta_cfg": root / "beta.yaml",
        "alpha_mat": root / "alpha.csv",
        "beta_mat": root / "beta.csv",
        "report": root / "extract-report.json",
        "alpha_model": root / "alpha-model.json",
        "beta_model": root / "beta-model.json",
        "settings": root / "settings.yaml",
        "labels": root / "labels.csv",
        "ensemble": root / "ensemble.json",
        "scores": root / "scores.csv",
        "eval": root / "eval.json",
    }
    write_theory_config(toy_config("alpha"), paths["alpha_cfg"])
    write_theory_config(toy_config("beta"), paths["beta_cfg"])
    paths["settings"].write_text(
        "bag_count: 3\nmax_epochs: 200\nearly_stop_patience: 15\npair_budget: 1\n",
        encoding="utf-8",
    )

    assert run("--seed", 5, "synth", "--out", paths["corpus"], "--n", 120) == 0
    records = read_corpus(paths["corpus"])
    write_labels({r.id: r.label for r in records}, paths["labels"])

    for cfg, mat in (("alpha_cfg", "alpha_mat"), ("beta_cfg", "beta_mat")):
        assert (
            run(
                "extract",
                "--corpus", paths["corpus"],
                "--config", paths[cfg],
                "--out", paths[mat],
                "--report", paths["report"],
            )
            == 0
        )
    for cfg, mat, model, theory in (
        ("alpha_cfg", "alpha_mat", "alpha_model", "alpha"),
        ("beta_cfg", "beta_mat", "beta_model", "beta"),
    ):
        assert (
            run(
                "train",
                "--features", paths[mat],
                "--theory-name", theory,
                "--settings", paths["settings"],
                "--config", paths[cfg],
                "--model-out", paths[model],
            )
            == 0
        )
    assert (
        run(
            "tune-ensemble",
            "--models", paths["alpha_model"], paths["beta_model"],
            "--features", paths["alpha_mat"], paths["beta_mat"],
            "--labels", paths["labels"],
            "--fit-split", "train",
            "--out", paths["ensemble"],
        )
        == 0
    )
    assert (
        run(
            "predict",
            "--ensemble", paths["ensemble"],
            "--models", paths["alpha_model"], paths["beta_model"],
            "--features", paths["alpha_mat"], paths["beta_mat"],
            "--scores-out", paths["scores"],
        )
        == 0
    )
    assert (
        run(
            "evaluate",
            "--ensemble", paths["ensemble"],
            "--models", paths["alpha_model"], paths["beta_model"],
            "--features", paths["alpha_mat"], paths["beta_mat"],
            "--labels", paths["labels"],
            "--report-out", paths["eval"],
        )
        == 0
    )
    return paths


def test_synth_output_is_valid_corpus(pipeline):
    records = read_corpus(pipeline["corpus"])
    assert len(records) == 120
    assert all(r.label in (0, 1) for r in records)


def test_extract_matrix_and_report(pipeline):
    matrix = read_feature_matrix(pipeline["beta_mat"])
    assert matrix.n_rows == 120
    assert matrix.feature_names == (
        "optimism__max_change",
        "optimism__linear_fit__attr=slope",
        "optimism__abs_energy",
    )
    report = json.loads(pipeline["report"].read_text())
    assert report["n_instances"] == 120


def test_model_file_loadable(pipeline):
    from humor_engine import load_model

    model = load_model(pipeline["alpha_model"])
    assert model.theory == "alpha"
    assert model.hypothesis_for("anger__max_change") == "a sudden jump"
    assert model.settings.bag_count == 3


def test_ensemble_file(pipeline):
    doc = json.loads(pipeline["ensemble"].read_text())
    assert doc["kind"] == "soft-voting-ensemble"
    assert doc["classifiers"] == ["alpha", "beta"]
    assert doc["diagnostics"]["fit_split"] == "train"


def test_scores_csv(pipeline):
    with open(pipeline["scores"], newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["id", "alpha", "beta", "ensemble_score"]
    assert len(rows) == 121
    for row in rows[1:]:
        for cell in row[1:]:
            assert 0.0 <= float(cell) <= 1.0


def test_evaluation_report(pipeline):
    doc = json.loads(pipeline["eval"].read_text())
    assert 0.9 <= doc["ensemble"]["f1_positive"] <= 1.0
    assert set(doc["per_classifier_f1"]) == {"alpha", "beta"}
    assert doc["confusion"]["tp"] + doc["confusion"]["fn"] == sum(
        1 for r in read_corpus(pipeline["corpus"]) if r.label == 1
    )


def test_manifests_written(pipeline):
    manifest = json.loads(
        (pipeline["scores"].parent / "scores.csv.manifest.json").read_text()
    )
    assert manifest["command"] == "predict"
    assert any(path.endswith("scores.csv") for path in manifest["outputs"])
    for digest in {**manifest["inputs"], **manifest["outputs"]}.values():
        assert len(digest) == 64 and set(digest) <= set("0123456789abcdef")


def test_explain_function_with_overlay(pipeline, tmp_path):
    out = tmp_path / "function.json"
    plot = tmp_path / "function.csv"
    code = run(
        "explain", "function",
        "--model", pipeline["alpha_model"],
        "--feature", "anger__max_change",
        "--overlay", "increasing",
        "--out", out,
        "--plot-csv", plot,
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["feature"] == "anger__max_change"
    assert -1.0 <= doc["overlay"]["agreement"] <= 1.0
    header = plot.read_text().splitlines()[0].split(",")
    assert "logit" in header


def test_explain_local_cli(pipeline, tmp_path):
    out = tmp_path / "local.json"
    some_id = read_corpus(pipeline["corpus"])[3].id
    code = run(
        "explain", "local",
        "--model", pipeline["alpha_model"],
        "--features", pipeline["alpha_mat"],
        "--id", some_id,
        "--top-k", 2,
        "--out", out,
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["instance_id"] == some_id
    assert len(doc["terms"]) == 2


def test_explain_global_cli(pipeline, tmp_path):
    out = tmp_path / "global.json"
    code = run(
        "explain", "global",
        "--model", pipeline["alpha_model"],
        "--features", pipeline["alpha_mat"],
        "--out", out,
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["importances"]
    values = [e["importance"] for e in doc["importances"]]
    assert values == sorted(values, reverse=True)


# ---------------------------------------------------------------------------
# exit codes


def test_missing_file_exits_2(tmp_path):
    assert run("extract", "--corpus", tmp_path / "nope.jsonl",
               "--config", "incongruity", "--out", tmp_path / "m.csv") == 2


def test_bad_config_exits_2(tmp_path, pipeline):
    bad = tmp_path / "bad.yaml"
    bad.write_text("theory: {name: x}\nfeatures: []\n", encoding="utf-8")
    assert run("extract", "--corpus", pipeline["corpus"],
               "--config", bad, "--out", tmp_path / "m.csv") == 2


def test_unknown_instance_id_exits_2(pipeline, tmp_path):
    assert run(
        "explain", "local",
        "--model", pipeline["alpha_model"],
        "--features", pipeline["alpha_mat"],
        "--id", "not-an-id",
        "--out", tmp_path / "x.json",
    ) == 2


def test_mismatched_ensemble_models_exit_2(pipeline, tmp_path):
    assert run(
        "predict",
        "--ensemble", pipeline["ensemble"],
        "--models", pipeline["alpha_model"],
        "--features", pipeline["alpha_mat"],
        "--scores-out", tmp_path / "s.csv",
    ) == 2


# ---------------------------------------------------------------------------
# determinism


def run_mini_pipeline(root):
    root.mkdir(exist_ok=True)
    corpus = root / "c.jsonl"
    cfg = root / "cfg.yaml"
    mat = root / "m.csv"
    model = root / "model.json"
    write_theory_config(toy_config("alpha"), cfg)
    assert run("--seed", 9, "synth", "--out", corpus, "--n", 60) == 0
    assert run("extract", "--corpus", corpus, "--config", cfg, "--out", mat) == 0
    settings = root / "s.yaml"
    settings.write_text("bag_count: 2\nmax_epochs: 80\npair_budget: 0\n")
    assert run(
        "train", "--features", mat, "--theory-name", "alpha",
        "--settings", settings, "--model-out", model,
    ) == 0
    return {
        "corpus": corpus.read_bytes(),
        "matrix": mat.read_bytes(),
        "model": model.read_bytes(),
    }


def test_artifacts_byte_identical_across_runs(tmp_path):
    a = run_mini_pipeline(tmp_path / "a")
    b = run_mini_pipeline(tmp_path / "b")
    for key in a:
        assert a[key] == b[key], f"{key} differs between identical runs"


def test_seed_changes_synth_output(tmp_path):
    out1, out2 = tmp_path / "s1.jsonl", tmp_path / "s2.jsonl"
    assert run("--seed", 1, "synth", "--out", out1, "--n", 20) == 0
    assert run("--seed", 2, "synth", "--out", out2, "--n", 20) == 0
    assert out1.read_bytes() != out2.read_bytes()
