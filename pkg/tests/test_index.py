import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from properties import (
    check_bounds,
    check_oracle,
    check_replication,
    check_second_person_independence,
    check_zero_tag_dilution,
    feeds,
)

from ingroup_index.corpus import Corpus, CorpusKind, Tweet, UserFeed, build_matched_splits
from ingroup_index.index import (
    INDEX_TSV_HEADER,
    IndexWarning,
    PersonPercentages,
    format_index_tsv,
    index_series,
    read_index_tsv,
    tweet_percentages,
    user_profile,
    write_index_tsv,
)
from ingroup_index.synth import synth_author_corpus, synth_tweet_corpus
from ingroup_index.tagger import PersonCounts, TaggingOptions


def test_tweet_percentages():
    p = tweet_percentages(PersonCounts(1, 1, 2, 5))
    assert (p.p1, p.p2, p.p3) == (25.0, 25.0, 50.0)
    assert not tweet_percentages(PersonCounts(0, 0, 0, 3)).has_tags


def test_user_profile_policies():
    pct = [PersonPercentages(100.0, 0.0, 0.0), PersonPercentages(0.0, 0.0, 0.0)]
    assert user_profile("u", pct).p1 == 50.0
    assert user_profile("u", pct, zero_tag="exclude").p1 == 100.0
    with pytest.raises(ValueError):
        user_profile("u", [PersonPercentages(0.0, 0.0, 0.0)], zero_tag="exclude")
    with pytest.raises(ValueError):
        user_profile("u", pct, zero_tag="maybe")


@settings(max_examples=200, deadline=None)
@given(feeds)
def test_bounds(texts):
    check_bounds(texts)


@settings(max_examples=200, deadline=None)
@given(feeds)
def test_oracle_equivalence(texts):
    check_oracle(texts)


@settings(max_examples=200, deadline=None)
@given(feeds, st.floats(0, 100))
def test_second_person_independence(texts, p2):
    check_second_person_independence(texts, p2)


@settings(max_examples=200, deadline=None)
@given(feeds, st.integers(1, 5), st.integers(0, 2**32))
def test_replication_invariance(texts, k, seed):
    check_replication(texts, k, seed)


@settings(max_examples=200, deadline=None)
@given(feeds, st.integers(0, 10))
def test_zero_tag_dilution(texts, m):
    check_zero_tag_dilution(texts, m)


def test_groups_series():
    c = synth_author_corpus(6, 4, seed=1)
    s = index_series(c)
    assert not s.paired
    assert len(s.scores_a) == 6 and len(s.scores_b) == 4
    assert s.tweets_a + s.tweets_b == c.n_tweets
    assert {p.group for p in s.profiles_a} == {"1"}


def test_matched_series_alignment():
    c = synth_tweet_corpus(n_authors=12, seed=2)
    splits, _ = build_matched_splits(c)
    s = index_series(splits)
    assert s.paired
    assert [p.author_id for p in s.profiles_a] == [p.author_id for p in s.profiles_b]
    assert [p.author_id for p in s.profiles_a] == [sp.author_id for sp in splits]
    for sp, pa, pb in zip(splits, s.profiles_a, s.profiles_b):
        assert pa.n_tweets == len(sp.subset_b) and pb.n_tweets == len(sp.subset_a)


def test_exclude_policy_drops_untagged_authors():
    feeds_ = (
        UserFeed("a", (Tweet("1", "a", "nosotros ganamos"),), 1),
        UserFeed("b", (Tweet("1", "b", "mesa"),), 1),
        UserFeed("c", (Tweet("1", "c", "ellos"),), 0),
    )
    s = index_series(Corpus(CorpusKind.PER_AUTHOR, feeds_), zero_tag="exclude")
    assert s.dropped == ("b",)
    assert s.scores_a == [100.0] and s.scores_b == [-100.0]
    assert index_series(Corpus(CorpusKind.PER_AUTHOR, feeds_)).scores_a == [100.0, 0.0]


def test_empty_input_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        s = index_series([])
    assert any(issubclass(w.category, IndexWarning) for w in caught)
    assert s.scores_a == [] and s.scores_b == []


def test_ambiguity_policy_changes_scores():
    c = Corpus(
        CorpusKind.PER_AUTHOR,
        (UserFeed("a", (Tweet("1", "a", "yo cantaba"),), 1), UserFeed("b", (Tweet("1", "b", "ellos"),), 0)),
    )
    assert index_series(c).scores_a == [100.0]
    assert index_series(c, options=TaggingOptions(ambiguity="third")).scores_a == [0.0]


def test_workers_do_not_change_scores():
    c = synth_author_corpus(20, 20, seed=7)
    assert index_series(c, workers=1) == index_series(c, workers=3)


def test_index_tsv_roundtrip(tmp_path):
    s = index_series(synth_author_corpus(3, 2, seed=4))
    path = tmp_path / "index.tsv"
    write_index_tsv(s, path)
    rows = read_index_tsv(path)
    assert format_index_tsv(s).split("\n")[0].split("\t") == list(INDEX_TSV_HEADER)
    assert len(rows) == 5
    assert [r[5] for r in rows] == s.scores_a + s.scores_b
