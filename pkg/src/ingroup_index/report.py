"""End-to-end analysis: ingest, tag, index, test, render.

The three directional hypotheses are available as presets: label-1 scores
(check-worthy tweets, fake-news spreaders, hate-speech spreaders) are
expected to sit below label-0 scores.
"""

from __future__ import annotations

import json
import logging
import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .corpus import Corpus, CorpusKind, build_matched_splits, filter_feeds_by_size, load_corpus
from .index import IndexSeries, format_index_rows, index_rows, index_series
from .stats import (
    Descriptives,
    StatsError,
    TestResult,
    descriptives,
    ks_normality,
    mann_whitney_u,
    wilcoxon_signed_rank,
)
from .tagger import Lexicon, TaggingOptions, default_lexicon

logger = logging.getLogger(__name__)

MODES = ("matched", "groups")
TABLE_COLUMNS = ("group", "users", "tweets", "Mdn", "rank")


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class AnalysisConfig:
    corpus_path: str
    corpus_format: str = "jsonl"
    mode: str = "groups"
    truth_path: str | None = None
    min_tweets: int = 0
    max_tweets: int | None = None
    ambiguity: str = "exclude"
    polite: str = "second"
    zero_tag: str = "include"
    alternative: str = "two-sided"
    continuity: bool = True
    ks_method: str = "asymptotic"
    ks_iterations: int = 9999
    seed: int = 0
    group_names: tuple[str, str] = ("1", "0")
    lexicon_path: str | None = None
    hypothesis: str | None = None
    # execution only; never changes numbers, so it stays out of the report echo
    workers: int = field(default=1, compare=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise AnalysisError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.max_tweets is not None and self.min_tweets > self.max_tweets:
            raise AnalysisError("min_tweets exceeds max_tweets")
        TaggingOptions(self.ambiguity, self.polite)  # validates both
        if self.zero_tag not in ("include", "exclude"):
            raise AnalysisError(f"zero_tag must be include or exclude, got {self.zero_tag!r}")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("workers")
        d["group_names"] = list(self.group_names)
        return d


HYPOTHESES = {
    "H1": dict(mode="matched", alternative="less", group_names=("relevant", "irrelevant")),
    "H2": dict(
        mode="groups",
        alternative="less",
        min_tweets=90,
        max_tweets=150,
        group_names=("fake news", "not fake news"),
    ),
    "H3": dict(mode="groups", alternative="less", group_names=("hate", "not hate")),
}


def hypothesis_config(name: str, corpus_path: str, corpus_format: str, **overrides) -> AnalysisConfig:
    """Preset for H1 (matched check-worthy vs not), H2 (fake-news spreaders,
    feeds of 90-150 tweets) or H3 (hate-speech spreaders)."""
    try:
        preset = HYPOTHESES[name]
    except KeyError:
        raise AnalysisError(f"unknown hypothesis {name!r}; choose from {sorted(HYPOTHESES)}") from None
    return AnalysisConfig(corpus_path, corpus_format, hypothesis=name, **{**preset, **overrides})


@dataclass(frozen=True)
class GroupRow:
    label: str
    name: str
    users: int
    tweets: int
    stats: Descriptives

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "GroupRow":
        return cls(d["label"], d["name"], d["users"], d["tweets"], Descriptives(**d["stats"]))


@dataclass(frozen=True)
class AnalysisReport:
    config: dict
    lexicon_version: str
    toolkit_version: str
    groups: tuple[GroupRow, GroupRow]
    main: TestResult
    normality: dict  # series name -> TestResult or None
    index_rows: tuple[tuple, ...]
    paired: bool
    excluded_authors: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "lexicon_version": self.lexicon_version,
            "toolkit_version": self.toolkit_version,
            "groups": [g.to_dict() for g in self.groups],
            "main": self.main.to_dict(),
            "normality": {k: (v.to_dict() if v is not None else None) for k, v in self.normality.items()},
            "index_rows": [list(r) for r in self.index_rows],
            "paired": self.paired,
            "excluded_authors": list(self.excluded_authors),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        return cls(
            config=d["config"],
            lexicon_version=d["lexicon_version"],
            toolkit_version=d["toolkit_version"],
            groups=tuple(GroupRow.from_dict(g) for g in d["groups"]),
            main=TestResult.from_dict(d["main"]),
            normality={k: (TestResult.from_dict(v) if v is not None else None) for k, v in d["normality"].items()},
            index_rows=tuple(tuple(r) for r in d["index_rows"]),
            paired=d["paired"],
            excluded_authors=tuple(d["excluded_authors"]),
            warnings=tuple(d["warnings"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _normality(scores, config, warn) -> TestResult | None:
    try:
        return ks_normality(scores, config.ks_method, config.ks_iterations, config.seed)
    except StatsError as exc:
        warn(f"normality check skipped: {exc}")
        return None


def build_series(corpus: Corpus, config: AnalysisConfig, lexicon: Lexicon, warn) -> tuple[IndexSeries, list[str]]:
    options = TaggingOptions(config.ambiguity, config.polite)
    excluded: list[str] = []
    max_t = math.inf if config.max_tweets is None else config.max_tweets
    if config.min_tweets > 0 or config.max_tweets is not None:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            corpus, discarded = filter_feeds_by_size(corpus, config.min_tweets, max_t)
        for w in caught:
            warn(str(w.message))
        if discarded:
            warn(f"size filter removed {len(discarded)} feed(s)")
            excluded.extend(discarded)

    if config.mode == "matched":
        if corpus.kind is not CorpusKind.PER_TWEET:
            raise AnalysisError("matched mode needs a per-tweet labeled corpus")
        splits, single = build_matched_splits(corpus)
        if single:
            warn(f"{len(single)} author(s) lack one label class and were excluded")
            excluded.extend(single)
        data = splits
    else:
        if corpus.kind is not CorpusKind.PER_AUTHOR:
            raise AnalysisError("groups mode needs a per-author labeled corpus")
        data = corpus

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        series = index_series(data, lexicon, options, config.zero_tag, config.workers)
    for w in caught:
        warn(str(w.message))
    if series.dropped:
        warn(f"{len(series.dropped)} author(s) had no person-tagged tweets and were dropped")
        excluded.extend(series.dropped)
    return series, excluded


def run_analysis(config: AnalysisConfig, corpus: Corpus | None = None) -> AnalysisReport:
    """Run the full pipeline. ``corpus`` short-circuits loading from
    ``config.corpus_path``."""
    notes: list[str] = []
    warn = notes.append
    lexicon = Lexicon.from_file(config.lexicon_path) if config.lexicon_path else default_lexicon()
    if corpus is None:
        corpus = load_corpus(config.corpus_path, config.corpus_format, config.truth_path)

    series, excluded = build_series(corpus, config, lexicon, warn)
    a, b = series.scores_a, series.scores_b
    for name, scores in zip(config.group_names, (a, b)):
        if len(scores) < 2:
            raise AnalysisError(f"group {name!r} has fewer than 2 users ({len(scores)})")

    rows = (
        GroupRow(series.labels[0], config.group_names[0], len(a), series.tweets_a, descriptives(a, b, config.group_names[0])),
        GroupRow(series.labels[1], config.group_names[1], len(b), series.tweets_b, descriptives(b, a, config.group_names[1])),
    )
    normality = {
        config.group_names[0]: _normality(a, config, warn),
        config.group_names[1]: _normality(b, config, warn),
    }
    if series.paired:
        normality["difference"] = _normality([x - y for x, y in zip(a, b)], config, warn)
        main = wilcoxon_signed_rank(a, b, config.alternative, continuity=config.continuity)
    else:
        main = mann_whitney_u(a, b, config.alternative, continuity=config.continuity)

    return AnalysisReport(
        config=config.echo(),
        lexicon_version=lexicon.version,
        toolkit_version=__version__,
        groups=rows,
        main=main,
        normality=normality,
        index_rows=tuple(index_rows(series)),
        paired=series.paired,
        excluded_authors=tuple(excluded),
        warnings=tuple(notes),
    )


# ---------------------------------------------------------------------------
# rendering


def _g4(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, int):
        return f"{x:,}"
    return f"{x:.4g}"


def _table_cells(report: AnalysisReport) -> list[list]:
    return [[g.name, g.users, g.tweets, g.stats.median, g.stats.mean_rank] for g in report.groups]


def _footer(report: AnalysisReport) -> list[tuple[str, object]]:
    m = report.main
    items: list[tuple[str, object]] = [("test", m.method), ("alternative", m.alternative), ("mode", m.mode)]
    if m.method == "mann-whitney-u":
        items += [("U", m.statistic), ("U_a", m.details["u_a"]), ("U_b", m.details["u_b"])]
    else:
        items += [("W", m.statistic), ("W+", m.details["w_plus"]), ("W-", m.details["w_minus"])]
        items += [("zeros", m.zero_count)]
    if m.z_value is not None:
        items.append(("Z", m.z_value))
    items += [("p", m.p_value), ("direction", m.direction)]
    for name, res in report.normality.items():
        items.append((f"KS D ({name})", None if res is None else res.statistic))
        items.append((f"KS p ({name})", None if res is None else res.p_value))
    items += [("lexicon", report.lexicon_version)]
    return items


def render_table(report: AnalysisReport, format: str = "text") -> str:
    """Group table (group, users, tweets, Mdn, rank) with a test footer.

    ``text`` and ``markdown`` round to 4 significant digits; ``json`` is the
    whole report and ``tsv`` the table and footer at full precision.
    """
    if format == "json":
        return report.to_json()
    cells = _table_cells(report)
    footer = _footer(report)
    if format == "tsv":
        lines = ["\t".join(TABLE_COLUMNS)]
        for name, users, tweets, mdn, rank in cells:
            lines.append("\t".join([name, str(users), str(tweets), repr(mdn), repr(rank)]))
        for key, value in footer:
            lines.append(f"#\t{key}\t{'' if value is None else repr(value) if isinstance(value, float) else value}")
        return "\n".join(lines) + "\n"
    shown = [[c if isinstance(c, str) else _g4(c) for c in row] for row in cells]
    foot = [(k, v if isinstance(v, str) else _g4(v)) for k, v in footer]
    if format == "markdown":
        lines = ["| " + " | ".join(TABLE_COLUMNS) + " |", "|" + "|".join("---" for _ in TABLE_COLUMNS) + "|"]
        lines += ["| " + " | ".join(row) + " |" for row in shown]
        lines.append("")
        lines += [f"- {k}: {v}" for k, v in foot]
        return "\n".join(lines) + "\n"
    if format == "text":
        widths = [max(len(h), *(len(r[i]) for r in shown)) for i, h in enumerate(TABLE_COLUMNS)]
        def fmt(row):
            return "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths)))
        lines = [fmt(TABLE_COLUMNS), "  ".join("-" * w for w in widths)]
        lines += [fmt(r) for r in shown]
        lines.append("")
        lines += [f"{k}: {v}" for k, v in foot]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {format!r}")


def parse_table_tsv(text: str) -> tuple[list[list], dict[str, str]]:
    """Inverse of the TSV rendering: table rows with numbers restored, and
    the footer as raw strings."""
    lines = text.rstrip("\n").split("\n")
    if tuple(lines[0].split("\t")) != TABLE_COLUMNS:
        raise ValueError("not a report table TSV")
    rows, footer = [], {}
    for line in lines[1:]:
        parts = line.split("\t")
        if parts[0] == "#":
            footer[parts[1]] = parts[2]
            continue
        name, users, tweets, mdn, rank = parts
        rows.append([name, int(users), int(tweets), float(mdn), None if rank == "None" else float(rank)])
    return rows, footer


def write_outputs(report: AnalysisReport, out_dir: str | Path) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "json": out / "report.json",
        "markdown": out / "table.md",
        "text": out / "table.txt",
        "tsv": out / "table.tsv",
    }
    for fmt, path in paths.items():
        path.write_text(render_table(report, fmt), encoding="utf-8")
    paths["index"] = out / "index.tsv"
    paths["index"].write_text(format_index_rows(report.index_rows), encoding="utf-8")
    return paths
