import os
import subprocess
import sys

import pytest

from colourlex.cli import main

from cli_workspace import build_inputs, run_pipeline


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = str(tmp_path_factory.mktemp("cli"))
    return root, run_pipeline(root)


def body(blob: bytes) -> list[str]:
    return [line for line in blob.decode().splitlines() if not line.startswith("#")]


def test_pipeline_outputs(workspace):
    root, results = workspace
    assert set(results) >= {"hitgen", "aggregate", "stats", "categories", "signature", "rank", "cooc", "evaluate"}
    stats = body(results["stats"][1]["stats.txt"])
    assert "chance_distinct(5,11)=0.344" in stats
    gold = body(results["categories"][1]["gold.tsv"])
    assert gold and all(float(line.split("\t")[3]) >= 0.5 for line in gold)
    report = dict(line.split("\t")[:2] for line in body(results["aggregate"][1]["report.tsv"]))
    assert int(report["discarded_wrong_q1"]) > 0 and int(report["discarded_duplicate"]) > 0
    evaluation = body(results["evaluate"][1]["evaluation.tsv"])
    methods = [line.split("\t")[0] for line in evaluation]
    assert "cooc-polarity" in methods and "baseline:gold_most_frequent" in methods


def test_header_records_config(workspace):
    _, results = workspace
    first = results["rank"][1]["ranking.tsv"].decode().splitlines()[0]
    assert first.startswith("# colourlex ") and '"command": "rank"' in first


def test_rerun_is_byte_identical(workspace):
    root, first = workspace
    second = run_pipeline(root)
    assert first == second


def test_parallel_flag_does_not_change_output(tmp_path):
    inp = build_inputs(str(tmp_path))
    outs = []
    for k in (1, 2, 8):
        out = tmp_path / f"cooc{k}.tsv"
        assert main(["cooc", "--inputs", inp["text"], "--thesaurus", inp["thesaurus"], "--parallel", str(k),
                     "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_evaluate_three_of_four(tmp_path, capsys):
    gold = tmp_path / "gold.tsv"
    gold.write_text("a\th\tred\nb\th\tblue\nc\th\tgreen\nd\th\twhite\n")
    preds = tmp_path / "p.tsv"
    preds.write_text("a\tm\tred\t1\nb\tm\tblue\t1\nc\tm\tgreen\t1\nd\tm\tABSTAIN\t0\n")
    assert main(["evaluate", "--predictions", str(preds), "--gold", str(gold)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[-1] == "m\t75.0\t4\t3\t1"


def test_missing_prediction_exit_code(tmp_path, capsys):
    gold = tmp_path / "gold.tsv"
    gold.write_text("a\th\tred\nb\th\tblue\n")
    preds = tmp_path / "p.tsv"
    preds.write_text("a\tm\tred\t1\n")
    assert main(["evaluate", "--predictions", str(preds), "--gold", str(gold)]) == 1
    assert capsys.readouterr().err.startswith("error: MissingPrediction:")


def test_missing_file_and_aux(tmp_path, capsys):
    assert main(["stats", "--lexicon", str(tmp_path / "nope.jsonl")]) == 1
    assert "FileNotFoundError" in capsys.readouterr().err
    th = tmp_path / "t.tsv"
    th.write_text("c\thead\ta,b\n")
    assert main(["predict", "--method", "cooc", "--thesaurus", str(th)]) == 1
    assert "MissingAuxiliary" in capsys.readouterr().err
    assert main(["predict", "--method", "telepathy", "--thesaurus", str(th)]) == 1


def test_wrong_file_guard(tmp_path, capsys):
    prose = tmp_path / "prose.txt"
    prose.write_text("just some\nordinary prose\n")
    assert main(["rank", "--unigrams", str(prose)]) == 1
    assert "FormatError" in capsys.readouterr().err


def test_fallback(tmp_path, capsys):
    th = tmp_path / "t.tsv"
    th.write_text("c\thead\tzzz\n")
    table = tmp_path / "cooc.tsv"
    table.write_text("other\t" + "\t".join(["1"] * 11) + "\n")
    assert main(["predict", "--method", "cooc", "--fallback", "baseline:random", "--seed", "1",
                 "--thesaurus", str(th), "--table", str(table)]) == 0
    row = capsys.readouterr().out.splitlines()[-1].split("\t")
    assert row[1] == "cooc+baseline:random" and row[2] != "ABSTAIN"


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "colourlex.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for name in ("hitgen", "aggregate", "stats", "categories", "signature", "rank", "cooc", "predict", "evaluate"):
        assert name in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "colourlex.cli", "stats"], capture_output=True, text=True,
                          cwd=os.fspath(tmp_path))
    assert proc.returncode == 1
    assert proc.stderr.splitlines()[-1].startswith("error: UsageError:")
