"""The thinc-adapters command: exit codes, output, determinism."""

from __future__ import annotations

import csv
import json

import pytest
import yaml

from thinc_adapters.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def write_texts(path, rows, header=("id", "text", "label")):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_tools(path, roles):
    doc = {"tools": [{"role": role} for role in roles]}
    path.write_text(yaml.safe_dump(doc), encoding="utf-8")


@pytest.fixture
def workspace(tmp_path):
    texts = tmp_path / "texts.csv"
    tools = tmp_path / "tools.yaml"
    out = tmp_path / "corpus.jsonl"
    write_texts(
        texts,
        [
            ("t1", "why did the chicken cross the road", "1"),
            ("t2", "the quarterly report is attached", "0"),
            ("t3", "a horse walks into a bar", ""),
        ],
    )
    write_tools(tools, ["emotion", "lm-token-probability"])
    return texts, tools, out


def test_extract_succeeds(workspace, capsys):
    texts, tools, out = workspace
    assert run("extract", "--texts", texts, "--tools", tools, "--out", out) == 0
    stdout = capsys.readouterr().out
    assert "wrote 3 of 3 instances" in stdout
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 3
    doc = json.loads(lines[0])
    assert doc["id"] == "t1"
    assert sorted(doc["channels"]) == ["anger", "joy", "lm_prob", "optimism", "sadness"]
    unlabeled = json.loads(lines[2])
    assert "label" not in unlabeled


def test_full_catalog_roles(workspace, tmp_path):
    texts, _, out = workspace
    from thinc_adapters import list_tools

    tools = tmp_path / "all-tools.yaml"
    write_tools(tools, [t.role for t in list_tools()])
    assert run("extract", "--texts", texts, "--tools", tools, "--out", out) == 0
    doc = json.loads(out.read_text(encoding="utf-8").splitlines()[0])
    assert len(doc["channels"]) == 15


def test_max_tokens_flag(workspace):
    texts, tools, out = workspace
    assert run(
        "extract", "--texts", texts, "--tools", tools, "--out", out,
        "--max-tokens", 3,
    ) == 0
    for line in out.read_text(encoding="utf-8").splitlines():
        for series in json.loads(line)["channels"].values():
            assert len(series) <= 3


def test_skipped_instances_are_reported(tmp_path, capsys):
    texts = tmp_path / "texts.csv"
    tools = tmp_path / "tools.yaml"
    out = tmp_path / "corpus.jsonl"
    write_texts(texts, [("keep", "some text", "1"), ("drop", "   ", "0")])
    write_tools(tools, ["hate"])
    assert run("extract", "--texts", texts, "--tools", tools, "--out", out) == 0
    stdout = capsys.readouterr().out
    assert "wrote 1 of 2 instances" in stdout
    assert "skipped (no tokens): drop" in stdout


def test_output_is_byte_identical_across_runs(workspace, tmp_path):
    texts, tools, _ = workspace
    out1 = tmp_path / "run1.jsonl"
    out2 = tmp_path / "run2.jsonl"
    assert run("extract", "--texts", texts, "--tools", tools, "--out", out1) == 0
    assert run("extract", "--texts", texts, "--tools", tools, "--out", out2) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_missing_inputs_exit_2(workspace, tmp_path, capsys):
    texts, tools, out = workspace
    assert run("extract", "--texts", tmp_path / "nope.csv", "--tools", tools, "--out", out) == 2
    assert run("extract", "--texts", texts, "--tools", tmp_path / "nope.yaml", "--out", out) == 2
    assert "file not found" in capsys.readouterr().err


def test_bad_tools_config_exits_2(workspace, tmp_path, capsys):
    texts, _, out = workspace
    tools = tmp_path / "bad.yaml"
    tools.write_text("tools:\n  - role: sarcasm\n", encoding="utf-8")
    assert run("extract", "--texts", texts, "--tools", tools, "--out", out) == 2
    assert "unknown tool role" in capsys.readouterr().err


def test_bad_texts_header_exits_2(workspace, tmp_path, capsys):
    _, tools, out = workspace
    texts = tmp_path / "bad.csv"
    write_texts(texts, [("t1", "x", "1")], header=("identifier", "text", "label"))
    assert run("extract", "--texts", texts, "--tools", tools, "--out", out) == 2
    assert "header must be" in capsys.readouterr().err


def test_texts_without_label_column(tmp_path):
    texts = tmp_path / "texts.csv"
    tools = tmp_path / "tools.yaml"
    out = tmp_path / "corpus.jsonl"
    write_texts(texts, [("t1", "hello world")], header=("id", "text"))
    write_tools(tools, ["subjectivity"])
    assert run("extract", "--texts", texts, "--tools", tools, "--out", out) == 0
    doc = json.loads(out.read_text(encoding="utf-8").splitlines()[0])
    assert "label" not in doc


def test_end_to_end_with_downstream_cli(workspace, tmp_path):
    pytest.importorskip("humor_engine")
    from humor_engine.cli import main as engine_main

    texts, _, out = workspace
    from thinc_adapters import list_tools

    tools = tmp_path / "all-tools.yaml"
    write_tools(tools, [t.role for t in list_tools()])
    assert run("extract", "--texts", texts, "--tools", tools, "--out", out) == 0
    matrix_path = tmp_path / "features.csv"
    code = engine_main(
        ["extract", "--corpus", str(out), "--config", "relief",
         "--out", str(matrix_path)]
    )
    assert code == 0
    header = matrix_path.read_text(encoding="utf-8").splitlines()[0]
    assert header.startswith("id,label,")
    assert len(header.split(",")) == 2 + 46
