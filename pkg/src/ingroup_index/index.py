"""Per-tweet person percentages, per-user profiles and the ingroup/outgroup index."""

from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import Corpus, CorpusKind, MatchedSplit, Tweet
from .tagger import Lexicon, PersonCounts, TaggingOptions, count_persons, default_lexicon

logger = logging.getLogger(__name__)

ZERO_TAG_POLICIES = ("include", "exclude")


class IndexWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PersonPercentages:
    p1: float
    p2: float
    p3: float

    @property
    def has_tags(self) -> bool:
        return self.p1 + self.p2 + self.p3 > 0


@dataclass(frozen=True)
class PersonProfile:
    author_id: str
    p1: float
    p2: float
    p3: float
    n_tweets: int
    group: str | None = None  # class label or matched subset tag


@dataclass(frozen=True)
class IndexScore:
    author_id: str
    value: float
    group: str | None = None


def tweet_percentages(counts: PersonCounts) -> PersonPercentages:
    total = counts.first + counts.second + counts.third
    if total == 0:
        return PersonPercentages(0.0, 0.0, 0.0)
    return PersonPercentages(
        100.0 * counts.first / total,
        100.0 * counts.second / total,
        100.0 * counts.third / total,
    )


def user_profile(
    author_id: str,
    percentages: Sequence[PersonPercentages],
    group: str | None = None,
    zero_tag: str = "include",
) -> PersonProfile:
    """Average per-tweet percentages over a user's tweets.

    Under ``zero_tag="include"`` tweets without person tags count as 0% in
    every category and stay in the denominator; ``"exclude"`` drops them.
    Sums are exactly rounded (``math.fsum``), so the result does not depend
    on tweet order.
    """
    if zero_tag not in ZERO_TAG_POLICIES:
        raise ValueError(f"zero_tag must be one of {ZERO_TAG_POLICIES}, got {zero_tag!r}")
    if zero_tag == "exclude":
        percentages = [p for p in percentages if p.has_tags]
    n = len(percentages)
    if n == 0:
        raise ValueError(f"no tweets to profile for {author_id!r}")
    return PersonProfile(
        author_id,
        math.fsum(p.p1 for p in percentages) / n,
        math.fsum(p.p2 for p in percentages) / n,
        math.fsum(p.p3 for p in percentages) / n,
        n,
        group,
    )


def ingroup_outgroup_index(profile: PersonProfile) -> IndexScore:
    """First-person minus third-person share; positive leans ingroup."""
    return IndexScore(profile.author_id, profile.p1 - profile.p3, profile.group)


# ---------------------------------------------------------------------------
# series over corpora


@dataclass(frozen=True)
class IndexSeries:
    """Index scores for the two comparison groups.

    ``labels`` names the groups in (a, b) order. For paired data the two
    tuples are aligned by author.
    """

    labels: tuple[str, str]
    profiles_a: tuple[PersonProfile, ...]
    profiles_b: tuple[PersonProfile, ...]
    paired: bool
    tweets_a: int = 0
    tweets_b: int = 0
    dropped: tuple[str, ...] = ()

    @property
    def scores_a(self) -> list[float]:
        return [ingroup_outgroup_index(p).value for p in self.profiles_a]

    @property
    def scores_b(self) -> list[float]:
        return [ingroup_outgroup_index(p).value for p in self.profiles_b]

    def rows(self) -> list[PersonProfile]:
        return list(self.profiles_a) + list(self.profiles_b)


def _count_texts(args) -> list[PersonCounts]:
    texts, lexicon, options = args
    return [count_persons(t, lexicon, options) for t in texts]


def count_tweets(
    tweet_lists: Sequence[Sequence[Tweet]],
    lexicon: Lexicon | None = None,
    options: TaggingOptions | None = None,
    workers: int = 1,
) -> list[list[PersonCounts]]:
    """Tag every tweet, one job per list. Output order matches input order."""
    lexicon = lexicon or default_lexicon()
    options = options or TaggingOptions()
    jobs = [([t.text for t in tl], lexicon, options) for tl in tweet_lists]
    if workers <= 1 or len(jobs) <= 1:
        return [_count_texts(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_count_texts, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def _profiles(author_ids, count_lists, group, zero_tag, dropped):
    out = []
    for author, counts in zip(author_ids, count_lists):
        pct = [tweet_percentages(c) for c in counts]
        try:
            out.append(user_profile(author, pct, group, zero_tag))
        except ValueError:
            dropped.append(author)
            out.append(None)
    return out


def index_series(
    data: Corpus | Sequence[MatchedSplit],
    lexicon: Lexicon | None = None,
    options: TaggingOptions | None = None,
    zero_tag: str = "include",
    workers: int = 1,
) -> IndexSeries:
    """Build the two comparison groups.

    A per-author corpus gives one score per user grouped by class label
    (group a = label 1, group b = label 0). Matched splits give two aligned
    scores per author (a = label-1 subset, b = label-0 subset). Under the
    exclude zero-tag policy an author left with no tagged tweets is dropped;
    for matched data the whole pair goes. Tweet totals are taken before
    that drop, so they match the filtered corpus.
    """
    dropped: list[str] = []
    if isinstance(data, Corpus):
        if data.kind is not CorpusKind.PER_AUTHOR:
            raise ValueError("per-tweet corpora must be split with build_matched_splits first")
        if not data.feeds:
            warnings.warn("empty corpus: index series is empty", IndexWarning, stacklevel=2)
        counts = count_tweets([f.tweets for f in data.feeds], lexicon, options, workers)
        feeds_a = [(f, c) for f, c in zip(data.feeds, counts) if f.class_label == 1]
        feeds_b = [(f, c) for f, c in zip(data.feeds, counts) if f.class_label == 0]
        prof_a = _profiles([f.author_id for f, _ in feeds_a], [c for _, c in feeds_a], "1", zero_tag, dropped)
        prof_b = _profiles([f.author_id for f, _ in feeds_b], [c for _, c in feeds_b], "0", zero_tag, dropped)
        prof_a = [p for p in prof_a if p is not None]
        prof_b = [p for p in prof_b if p is not None]
        return IndexSeries(
            ("1", "0"),
            tuple(prof_a),
            tuple(prof_b),
            paired=False,
            tweets_a=sum(len(f.tweets) for f, _ in feeds_a),
            tweets_b=sum(len(f.tweets) for f, _ in feeds_b),
            dropped=tuple(dropped),
        )

    splits = list(data)
    if not splits:
        warnings.warn("no matched splits: index series is empty", IndexWarning, stacklevel=2)
    lists = [s.subset_b for s in splits] + [s.subset_a for s in splits]
    counts = count_tweets(lists, lexicon, options, workers)
    authors = [s.author_id for s in splits]
    prof_a = _profiles(authors, counts[: len(splits)], "1", zero_tag, dropped)
    prof_b = _profiles(authors, counts[len(splits) :], "0", zero_tag, dropped)
    keep = [i for i in range(len(splits)) if prof_a[i] is not None and prof_b[i] is not None]
    return IndexSeries(
        ("1", "0"),
        tuple(prof_a[i] for i in keep),
        tuple(prof_b[i] for i in keep),
        paired=True,
        tweets_a=sum(len(s.subset_b) for s in splits),
        tweets_b=sum(len(s.subset_a) for s in splits),
        dropped=tuple(sorted(set(dropped), key=authors.index)),
    )


INDEX_TSV_HEADER = ("author_id", "subset_or_class", "P1", "P2", "P3", "index", "n_tweets")


def index_rows(series: IndexSeries) -> list[tuple]:
    return [
        (p.author_id, p.group, p.p1, p.p2, p.p3, ingroup_outgroup_index(p).value, p.n_tweets)
        for p in series.rows()
    ]


def format_index_tsv(series: IndexSeries) -> str:
    return format_index_rows(index_rows(series))


def format_index_rows(rows) -> str:
    lines = ["\t".join(INDEX_TSV_HEADER)]
    for author, group, p1, p2, p3, value, n in rows:
        lines.append("\t".join([author, group or "", repr(p1), repr(p2), repr(p3), repr(value), str(n)]))
    return "\n".join(lines) + "\n"


def write_index_tsv(series: IndexSeries, path: str | Path) -> None:
    Path(path).write_text(format_index_tsv(series), encoding="utf-8")


def read_index_tsv(path: str | Path) -> list[tuple]:
    rows = []
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or tuple(lines[0].split("\t")) != INDEX_TSV_HEADER:
        raise ValueError(f"{path}: not an index TSV")
    for line in lines[1:]:
        author, group, p1, p2, p3, value, n = line.split("\t")
        rows.append((author, group or None, float(p1), float(p2), float(p3), float(value), int(n)))
    return rows
