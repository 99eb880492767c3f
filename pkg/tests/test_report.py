import json

import pytest

from ingroup_index.corpus import write_jsonl
from ingroup_index.report import (
    TABLE_COLUMNS,
    AnalysisConfig,
    AnalysisError,
    AnalysisReport,
    hypothesis_config,
    parse_table_tsv,
    render_table,
    run_analysis,
    write_outputs,
)
from ingroup_index.synth import synth_author_corpus, synth_tweet_corpus


@pytest.fixture(scope="module")
def groups_report():
    corpus = synth_author_corpus(30, 25, seed=3)
    return corpus, run_analysis(AnalysisConfig("<memory>", "jsonl", mode="groups", alternative="less"), corpus)


def test_groups_report(groups_report):
    corpus, r = groups_report
    assert r.main.method == "mann-whitney-u"
    assert [g.users for g in r.groups] == [30, 25]
    assert sum(g.tweets for g in r.groups) == corpus.n_tweets
    assert r.main.direction == "less" and r.main.p_value < 0.01
    assert set(r.normality) == {"1", "0"}
    assert len(r.index_rows) == 55


def test_matched_report():
    corpus = synth_tweet_corpus(n_authors=40, seed=1)
    r = run_analysis(hypothesis_config("H1", "<memory>", "jsonl"), corpus)
    assert r.paired and r.main.method == "wilcoxon-signed-rank"
    assert "difference" in r.normality
    assert r.groups[0].name == "relevant"
    assert r.groups[0].users == r.groups[1].users
    assert len(r.excluded_authors) == 40 - r.groups[0].users
    assert r.config["hypothesis"] == "H1" and "workers" not in r.config


def test_json_roundtrip(groups_report):
    _, r = groups_report
    back = AnalysisReport.from_dict(json.loads(r.to_json()))
    assert back.to_json() == r.to_json()


def test_table_formats(groups_report):
    _, r = groups_report
    text = render_table(r, "text")
    assert text.split("\n")[0].split() == list(TABLE_COLUMNS)
    md = render_table(r, "markdown")
    assert md.startswith("| group | users | tweets | Mdn | rank |")
    rows, footer = parse_table_tsv(render_table(r, "tsv"))
    assert rows[0][:3] == ["1", 30, r.groups[0].tweets]
    assert rows[0][3] == r.groups[0].stats.median  # full precision survives
    assert float(footer["p"]) == r.main.p_value
    assert footer["test"] == "mann-whitney-u"
    with pytest.raises(ValueError):
        render_table(r, "html")


def test_write_outputs(tmp_path, groups_report):
    _, r = groups_report
    paths = write_outputs(r, tmp_path / "out")
    assert {p.name for p in paths.values()} == {"report.json", "table.md", "table.txt", "table.tsv", "index.tsv"}
    assert json.loads(paths["json"].read_text())["main"]["method"] == "mann-whitney-u"


def test_loads_from_path(tmp_path):
    corpus = synth_tweet_corpus(n_authors=10, seed=2)
    write_jsonl(corpus, tmp_path / "c.jsonl")
    r = run_analysis(AnalysisConfig(str(tmp_path / "c.jsonl"), "jsonl", mode="matched"))
    assert r.paired


def test_config_validation():
    with pytest.raises(AnalysisError):
        AnalysisConfig("x", mode="pairs")
    with pytest.raises(AnalysisError):
        AnalysisConfig("x", min_tweets=10, max_tweets=5)
    with pytest.raises(ValueError):
        AnalysisConfig("x", ambiguity="maybe")
    with pytest.raises(AnalysisError):
        hypothesis_config("H9", "x", "jsonl")


def test_h2_preset_filters_by_size():
    corpus = synth_author_corpus(10, 10, tweets_per_user=(80, 160), seed=5)
    r = run_analysis(hypothesis_config("H2", "<memory>", "jsonl"), corpus)
    kept = sum(1 for f in corpus.feeds if 90 <= len(f) <= 150)
    assert sum(g.users for g in r.groups) == kept
    assert len(r.excluded_authors) == 20 - kept


def test_mode_corpus_mismatch():
    with pytest.raises(AnalysisError, match="per-tweet"):
        run_analysis(AnalysisConfig("x", mode="matched"), synth_author_corpus(3, 3))
    with pytest.raises(AnalysisError, match="per-author"):
        run_analysis(AnalysisConfig("x", mode="groups"), synth_tweet_corpus(5))


def test_small_group_rejected():
    with pytest.raises(AnalysisError, match="fewer than 2"):
        run_analysis(AnalysisConfig("x", mode="groups"), synth_author_corpus(1, 5))
