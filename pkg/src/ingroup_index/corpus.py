"""Loading, validation, filtering and grouping of labeled tweet corpora.

Two corpus shapes are supported:

* per-tweet labeled: every tweet carries a 0/1 label (check-worthiness style),
  later split per author into matched subsets;
* per-author labeled: each user feed carries a 0/1 class label (spreader /
  non-spreader style).

Three on-disk formats are read: JSONL, TSV and a feed directory with a
``author_id:::label`` truth file.
"""

from __future__ import annotations

import enum
import json
import logging
import math
import warnings
from collections import OrderedDict
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

logger = logging.getLogger(__name__)

TSV_HEADER = ("id", "author_id", "label", "text")
TRUTH_SEPARATOR = ":::"
TRUTH_FILENAME = "truth.txt"
FEED_SUFFIX = ".txt"


class CorpusError(ValueError):
    """Raised for any invalid corpus input."""


class MalformedRecordError(CorpusError):
    def __init__(self, message: str, path: str | Path | None = None, line: int | None = None):
        self.path = str(path) if path is not None else None
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class CorpusWarning(UserWarning):
    pass


class CorpusKind(str, enum.Enum):
    PER_TWEET = "per-tweet"
    PER_AUTHOR = "per-author"


class CorpusFormat(str, enum.Enum):
    JSONL = "jsonl"
    TSV = "tsv"
    FEEDDIR = "feeddir"


@dataclass(frozen=True)
class Tweet:
    id: str
    author_id: str
    text: str
    label: int | None = None


@dataclass(frozen=True)
class UserFeed:
    author_id: str
    tweets: tuple[Tweet, ...]
    class_label: int | None = None

    def __post_init__(self):
        if not self.tweets:
            raise CorpusError(f"feed of {self.author_id!r} has no tweets")
        for t in self.tweets:
            if t.author_id != self.author_id:
                raise CorpusError(
                    f"tweet {t.id!r} belongs to {t.author_id!r}, not {self.author_id!r}"
                )

    def __len__(self) -> int:
        return len(self.tweets)


@dataclass(frozen=True)
class Corpus:
    kind: CorpusKind
    feeds: tuple[UserFeed, ...]
    source: str = ""
    format: str = ""
    # (author_id, tweet_id) in file order; lets JSONL/TSV re-serialize verbatim
    order: tuple[tuple[str, str], ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        seen = set()
        for feed in self.feeds:
            if feed.author_id in seen:
                raise CorpusError(f"duplicate author {feed.author_id!r}")
            seen.add(feed.author_id)
            if self.kind is CorpusKind.PER_AUTHOR:
                if feed.class_label not in (0, 1):
                    raise CorpusError(f"author {feed.author_id!r} lacks a 0/1 class label")
                if any(t.label is not None for t in feed.tweets):
                    raise CorpusError("per-author corpus must not carry tweet labels")
            else:
                if feed.class_label is not None:
                    raise CorpusError("per-tweet corpus must not carry author labels")
                if any(t.label not in (0, 1) for t in feed.tweets):
                    raise CorpusError(f"author {feed.author_id!r} has an unlabeled tweet")

    @property
    def n_users(self) -> int:
        return len(self.feeds)

    @property
    def n_tweets(self) -> int:
        return sum(len(f.tweets) for f in self.feeds)

    def feed(self, author_id: str) -> UserFeed:
        for f in self.feeds:
            if f.author_id == author_id:
                return f
        raise KeyError(author_id)

    def iter_tweets(self) -> Iterator[Tweet]:
        """Tweets in ingestion order when known, otherwise grouped by feed."""
        if self.order is not None:
            index = {(t.author_id, t.id): t for f in self.feeds for t in f.tweets}
            if len(index) == self.n_tweets and set(index) == set(self.order):
                for key in self.order:
                    yield index[key]
                return
        for f in self.feeds:
            yield from f.tweets


@dataclass(frozen=True)
class MatchedSplit:
    """One author's tweets divided by tweet label: ``subset_a`` = 0, ``subset_b`` = 1."""

    author_id: str
    subset_a: tuple[Tweet, ...]
    subset_b: tuple[Tweet, ...]

    def __post_init__(self):
        if not self.subset_a or not self.subset_b:
            raise CorpusError(f"matched split of {self.author_id!r} needs both classes")


# ---------------------------------------------------------------------------
# parsing helpers


def _parse_label(raw, path, line) -> int | None:
    if raw is None:
        return None
    if isinstance(raw, bool) or not isinstance(raw, int) or raw not in (0, 1):
        raise MalformedRecordError(f"label must be 0, 1 or null, got {raw!r}", path, line)
    return raw


def _check_text(text, path, line) -> str:
    if not isinstance(text, str):
        raise MalformedRecordError("text must be a string", path, line)
    if not text.strip():
        raise MalformedRecordError("empty tweet text", path, line)
    return text


def _check_id(value, name, path, line) -> str:
    if not isinstance(value, str) or not value:
        raise MalformedRecordError(f"{name} must be a non-empty string", path, line)
    return value


def unescape_tsv(field_text: str) -> str:
    out = []
    it = iter(field_text)
    for ch in it:
        if ch != "\\":
            out.append(ch)
            continue
        nxt = next(it, "")
        out.append({"t": "\t", "n": "\n", "r": "\r", "\\": "\\"}.get(nxt, "\\" + nxt))
    return "".join(out)


def escape_tsv(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")


def _assemble(records: list[Tweet], source, fmt, truth: dict[str, int] | None) -> Corpus:
    """Group flat tweet records into feeds, validating label placement."""
    labeled = [t.label is not None for t in records]
    if truth is not None:
        if any(labeled):
            raise CorpusError(f"{source}: tweet labels and a truth file are mutually exclusive")
        kind = CorpusKind.PER_AUTHOR
    elif records and all(labeled):
        kind = CorpusKind.PER_TWEET
    elif not records:
        kind = CorpusKind.PER_TWEET
    else:
        raise CorpusError(
            f"{source}: tweets without labels need a truth file; mixed labeling is not allowed"
        )

    grouped: OrderedDict[str, list[Tweet]] = OrderedDict()
    for t in records:
        bucket = grouped.setdefault(t.author_id, [])
        if any(prev.id == t.id for prev in bucket):
            raise CorpusError(f"{source}: duplicate tweet id {t.id!r} for author {t.author_id!r}")
        bucket.append(t)

    feeds = []
    if kind is CorpusKind.PER_AUTHOR:
        missing = [a for a in truth if a not in grouped]
        if missing:
            raise CorpusError(f"{source}: truth file lists author(s) with no tweets: {', '.join(missing)}")
        unlabeled = [a for a in grouped if a not in truth]
        if unlabeled:
            raise CorpusError(f"{source}: author(s) missing from truth file: {', '.join(unlabeled)}")
    for author, tweets in grouped.items():
        label = truth[author] if kind is CorpusKind.PER_AUTHOR else None
        feeds.append(UserFeed(author, tuple(tweets), label))
    order = tuple((t.author_id, t.id) for t in records)
    return Corpus(kind, tuple(feeds), str(source), fmt, order)


def read_truth(path: str | Path) -> dict[str, int]:
    """Read an ``author_id:::label`` file, one author per line."""
    path = Path(path)
    truth: dict[str, int] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split(TRUTH_SEPARATOR)
            if len(parts) != 2 or not parts[0].strip():
                raise MalformedRecordError("expected author_id:::label", path, lineno)
            author, raw = parts[0].strip(), parts[1].strip()
            if raw not in ("0", "1"):
                raise MalformedRecordError(f"label must be 0 or 1, got {raw!r}", path, lineno)
            if author in truth:
                raise MalformedRecordError(f"duplicate author {author!r}", path, lineno)
            truth[author] = int(raw)
    return truth


def _read_jsonl(path: Path) -> list[Tweet]:
    records = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecordError(f"invalid JSON ({exc.msg})", path, lineno) from None
            if not isinstance(obj, dict):
                raise MalformedRecordError("record must be a JSON object", path, lineno)
            extra = set(obj) - set(TSV_HEADER)
            if extra or "id" not in obj or "author_id" not in obj or "text" not in obj:
                raise MalformedRecordError(
                    "record must have keys id, author_id, label, text", path, lineno
                )
            records.append(
                Tweet(
                    id=_check_id(obj["id"], "id", path, lineno),
                    author_id=_check_id(obj["author_id"], "author_id", path, lineno),
                    text=_check_text(obj["text"], path, lineno),
                    label=_parse_label(obj.get("label"), path, lineno),
                )
            )
    return records


def _read_tsv(path: Path) -> list[Tweet]:
    records = []
    with path.open(encoding="utf-8", newline="") as fh:
        header = fh.readline().rstrip("\r\n")
        if tuple(header.split("\t")) != TSV_HEADER:
            raise MalformedRecordError(
                "header must be: " + "\t".join(TSV_HEADER), path, 1
            )
        for lineno, line in enumerate(fh, 2):
            line = line.rstrip("\r\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 4:
                raise MalformedRecordError(f"expected 4 columns, got {len(cols)}", path, lineno)
            tid, author, raw_label, text = cols
            if raw_label == "":
                label = None
            elif raw_label in ("0", "1"):
                label = int(raw_label)
            else:
                raise MalformedRecordError(f"label must be 0, 1 or empty, got {raw_label!r}", path, lineno)
            records.append(
                Tweet(
                    id=_check_id(tid, "id", path, lineno),
                    author_id=_check_id(author, "author_id", path, lineno),
                    text=_check_text(unescape_tsv(text), path, lineno),
                    label=label,
                )
            )
    return records


def _read_feeddir(path: Path, truth_path: Path | None) -> Corpus:
    truth_path = truth_path or path / TRUTH_FILENAME
    if not truth_path.exists():
        raise CorpusError(f"{path}: truth file {truth_path.name} not found")
    truth = read_truth(truth_path)
    feed_files = {}
    for p in sorted(path.iterdir()):
        if p.suffix != FEED_SUFFIX or p.resolve() == truth_path.resolve():
            continue
        feed_files[p.stem] = p
    missing = [a for a in truth if a not in feed_files]
    if missing:
        raise CorpusError(f"{path}: no feed file for author(s) {', '.join(missing)}")
    unlabeled = [a for a in feed_files if a not in truth]
    if unlabeled:
        raise CorpusError(f"{path}: feed file(s) without truth entry: {', '.join(unlabeled)}")

    feeds = []
    for author in truth:
        fp = feed_files[author]
        tweets = []
        with fp.open(encoding="utf-8") as fh:
            lines = fh.read().split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        for lineno, line in enumerate(lines, 1):
            text = _check_text(line.rstrip("\r"), fp, lineno)
            tweets.append(Tweet(id=str(lineno), author_id=author, text=text))
        if not tweets:
            raise MalformedRecordError("feed file is empty", fp)
        feeds.append(UserFeed(author, tuple(tweets), truth[author]))
    return Corpus(CorpusKind.PER_AUTHOR, tuple(feeds), str(path), CorpusFormat.FEEDDIR.value)


def load_corpus(
    path: str | Path,
    format: str | CorpusFormat,
    truth: str | Path | None = None,
) -> Corpus:
    """Load and validate a corpus.

    JSONL and TSV files whose tweets all carry labels become per-tweet
    corpora; unlabeled files need ``truth`` (an ``author_id:::label`` file)
    and become per-author corpora. A feed directory always reads its truth
    file, ``truth.txt`` unless ``truth`` says otherwise.
    """
    path = Path(path)
    fmt = CorpusFormat(format)
    if not path.exists():
        raise CorpusError(f"{path} does not exist")
    if fmt is CorpusFormat.FEEDDIR:
        if not path.is_dir():
            raise CorpusError(f"{path} is not a directory")
        corpus = _read_feeddir(path, Path(truth) if truth else None)
    else:
        records = _read_jsonl(path) if fmt is CorpusFormat.JSONL else _read_tsv(path)
        corpus = _assemble(records, path, fmt.value, read_truth(truth) if truth else None)
    logger.info("loaded %s: %d users, %d tweets", path, corpus.n_users, corpus.n_tweets)
    return corpus


def corpus_from_feeds(feeds: Iterable[UserFeed], kind: CorpusKind, source: str = "<memory>") -> Corpus:
    return Corpus(kind, tuple(feeds), source, "memory")


# ---------------------------------------------------------------------------
# writers


def dumps_jsonl(corpus: Corpus) -> str:
    lines = []
    for t in corpus.iter_tweets():
        obj = {"id": t.id, "author_id": t.author_id, "label": t.label, "text": t.text}
        lines.append(json.dumps(obj, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


def write_jsonl(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(dumps_jsonl(corpus), encoding="utf-8")


def write_tsv(corpus: Corpus, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        fh.write("\t".join(TSV_HEADER) + "\n")
        for t in corpus.iter_tweets():
            label = "" if t.label is None else str(t.label)
            fh.write(f"{t.id}\t{t.author_id}\t{label}\t{escape_tsv(t.text)}\n")


def write_truth(corpus: Corpus, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for f in corpus.feeds:
            fh.write(f"{f.author_id}{TRUTH_SEPARATOR}{f.class_label}\n")


def write_feeddir(corpus: Corpus, directory: str | Path) -> None:
    """Write a per-author corpus as one file per author plus ``truth.txt``.

    Tweet text containing newlines cannot be represented and is rejected.
    """
    if corpus.kind is not CorpusKind.PER_AUTHOR:
        raise CorpusError("feed directories hold per-author corpora only")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for f in corpus.feeds:
        if any("\n" in t.text or "\r" in t.text for t in f.tweets):
            raise CorpusError(f"feed {f.author_id!r} has multi-line tweets")
        (directory / f"{f.author_id}{FEED_SUFFIX}").write_text(
            "".join(t.text + "\n" for t in f.tweets), encoding="utf-8"
        )
    write_truth(corpus, directory / TRUTH_FILENAME)


# ---------------------------------------------------------------------------
# transformations


def filter_feeds_by_size(
    corpus: Corpus, min_tweets: int = 0, max_tweets: float = math.inf
) -> tuple[Corpus, list[str]]:
    """Keep feeds with ``min_tweets <= len(feed) <= max_tweets``.

    Returns the filtered corpus and the discarded author ids.
    """
    if min_tweets > max_tweets:
        raise ValueError(f"min_tweets ({min_tweets}) > max_tweets ({max_tweets})")
    kept, discarded = [], []
    for f in corpus.feeds:
        (kept if min_tweets <= len(f.tweets) <= max_tweets else discarded).append(f)
    if discarded:
        logger.info("size filter [%s, %s] discarded %d feeds", min_tweets, max_tweets, len(discarded))
    if not kept and corpus.feeds:
        warnings.warn(
            f"size filter [{min_tweets}, {max_tweets}] removed every feed", CorpusWarning, stacklevel=2
        )
    kept_ids = {f.author_id for f in kept}
    order = None
    if corpus.order is not None:
        order = tuple(k for k in corpus.order if k[0] in kept_ids)
    return replace(corpus, feeds=tuple(kept), order=order), [f.author_id for f in discarded]


def build_matched_splits(corpus: Corpus) -> tuple[list[MatchedSplit], list[str]]:
    """Split each author's tweets by label.

    Authors lacking either class are excluded; their ids are returned
    alongside the splits.
    """
    if corpus.kind is not CorpusKind.PER_TWEET:
        raise CorpusError("matched splits need a per-tweet labeled corpus")
    splits, excluded = [], []
    for f in corpus.feeds:
        a = tuple(t for t in f.tweets if t.label == 0)
        b = tuple(t for t in f.tweets if t.label == 1)
        if a and b:
            splits.append(MatchedSplit(f.author_id, a, b))
        else:
            excluded.append(f.author_id)
    if excluded:
        logger.info("%d authors lack one label class and were excluded", len(excluded))
    return splits, excluded
