import json
import subprocess
import sys

from ingroup_index.cli import main


def test_synth_then_analyze(tmp_path, capsys):
    corpus = tmp_path / "c.jsonl"
    assert main(["synth", "--users", "40", "--seed", "1", "--out", str(corpus)]) == 0
    truth = tmp_path / "c.truth.txt"
    assert truth.exists()
    out = tmp_path / "out"
    code = main(
        ["analyze", "--corpus", str(corpus), "--format", "jsonl", "--truth", str(truth),
         "--mode", "groups", "--alternative", "less", "--out", str(out)]
    )
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["main"]["method"] == "mann-whitney-u"
    assert "group" in capsys.readouterr().out


def test_hypothesis_preset_on_feeddir(tmp_path):
    feeds = tmp_path / "feeds"
    assert main(["synth", "--users", "12", "--format", "feeddir", "--out", str(feeds)]) == 0
    out = tmp_path / "out"
    assert main(["analyze", "--corpus", str(feeds), "--format", "feeddir", "--hypothesis", "H3", "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["config"]["alternative"] == "less"
    assert [g["name"] for g in report["groups"]] == ["hate", "not hate"]


def test_index_command(tmp_path, capsys):
    corpus = tmp_path / "t.tsv"
    assert main(["synth", "--kind", "tweets", "--users", "10", "--format", "tsv", "--out", str(corpus)]) == 0
    capsys.readouterr()
    assert main(["index", "--corpus", str(corpus), "--format", "tsv", "--mode", "matched"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0].startswith("author_id\tsubset_or_class")


def test_tag_command(capsys):
    assert main(["tag", "Nosotros ganamos"]) == 0
    rows = [line.split("\t") for line in capsys.readouterr().out.strip().split("\n")]
    assert rows[0][4] == "first" and rows[0][5] == "pronoun"
    assert rows[1][4] == "first" and rows[1][5] == "verb"


def test_errors_exit_2(tmp_path, capsys):
    assert main(["analyze", "--corpus", str(tmp_path / "nope.jsonl"), "--format", "jsonl",
                 "--mode", "groups", "--out", str(tmp_path)]) == 2
    assert "does not exist" in capsys.readouterr().err
    assert main(["index", "--corpus", str(tmp_path), "--format", "jsonl"]) == 2


def test_module_entry_selftest():
    proc = subprocess.run(
        [sys.executable, "-m", "ingroup_index", "selftest", "--cases", "20"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.count("PASS") == 4
