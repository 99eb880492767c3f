"""Command line entry point: analyze, tag, index, selftest, synth."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .corpus import CorpusError, load_corpus, write_feeddir, write_jsonl, write_truth, write_tsv
from .index import format_index_tsv
from .report import HYPOTHESES, AnalysisConfig, AnalysisError, build_series, render_table, run_analysis, write_outputs
from .stats import StatsError
from .tagger import Lexicon, LexiconError, TaggingOptions, default_lexicon, tag_text


def _add_corpus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", required=True, help="corpus file or feed directory")
    p.add_argument("--format", required=True, choices=["jsonl", "tsv", "feeddir"])
    p.add_argument("--truth", help="author_id:::label file for unlabeled JSONL/TSV")
    p.add_argument("--mode", choices=["matched", "groups"], help="matched pairs or independent groups")
    p.add_argument("--min-tweets", type=int, default=None)
    p.add_argument("--max-tweets", type=int, default=None)
    p.add_argument("--ambiguity", choices=["exclude", "third"], default=None)
    p.add_argument("--polite", choices=["second", "third"], default=None, help="tag usted/ustedes as")
    p.add_argument("--zero-tag", choices=["include", "exclude"], default=None)
    p.add_argument("--lexicon", help="lexicon file (default: bundled Spanish lexicon)")
    p.add_argument("--workers", type=int, default=1)


def _config(args) -> AnalysisConfig:
    preset = dict(HYPOTHESES[args.hypothesis]) if getattr(args, "hypothesis", None) else {}
    explicit = {
        "mode": args.mode,
        "min_tweets": args.min_tweets,
        "max_tweets": args.max_tweets,
        "ambiguity": args.ambiguity,
        "polite": args.polite,
        "zero_tag": args.zero_tag,
        "alternative": getattr(args, "alternative", None),
        "seed": getattr(args, "seed", None),
        "ks_method": getattr(args, "ks_method", None),
        "lexicon_path": args.lexicon,
        "truth_path": args.truth,
    }
    if getattr(args, "no_continuity", False):
        explicit["continuity"] = False
    if getattr(args, "group_names", None):
        explicit["group_names"] = tuple(args.group_names)
    merged = {**preset, **{k: v for k, v in explicit.items() if v is not None}}
    if "mode" not in merged:
        raise AnalysisError("--mode is required unless --hypothesis is given")
    return AnalysisConfig(
        args.corpus,
        args.format,
        hypothesis=getattr(args, "hypothesis", None),
        workers=args.workers,
        **merged,
    )


def cmd_analyze(args) -> int:
    config = _config(args)
    report = run_analysis(config)
    paths = write_outputs(report, args.out)
    sys.stdout.write(render_table(report, "text"))
    for w in report.warnings:
        logging.getLogger("ingroup_index").warning(w)
    print(f"\nwrote {', '.join(str(p) for p in paths.values())}")
    return 0


def cmd_index(args) -> int:
    config = _config(args)
    lexicon = Lexicon.from_file(config.lexicon_path) if config.lexicon_path else default_lexicon()
    corpus = load_corpus(config.corpus_path, config.corpus_format, config.truth_path)
    series, _ = build_series(corpus, config, lexicon, lambda msg: logging.getLogger("ingroup_index").warning(msg))
    text = format_index_tsv(series)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_tag(args) -> int:
    lexicon = Lexicon.from_file(args.lexicon) if args.lexicon else default_lexicon()
    options = TaggingOptions(args.ambiguity, args.polite)
    texts = args.text if args.text else [line.rstrip("\n") for line in sys.stdin]
    for text in texts:
        for tok, tag in tag_text(text, lexicon, options):
            source = tag.source.value if tag.source else "-"
            print(f"{tok.surface}\t{tok.normalized}\t{tok.span[0]}:{tok.span[1]}\t{tok.kind.value}\t{tag.person.value}\t{source}")
        print()
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    checks = run_selftest(args.cases, args.seed)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.detail})")
    return 0 if all(c.passed for c in checks) else 1


def cmd_synth(args) -> int:
    from .synth import TweetMix, synth_author_corpus, synth_null_corpus, synth_tweet_corpus

    out = Path(args.out)
    if args.kind == "tweets":
        corpus = synth_tweet_corpus(
            n_authors=args.users,
            mix_label1=TweetMix(args.p_third_a),
            mix_label0=TweetMix(args.p_third_b),
            seed=args.seed,
        )
    elif args.kind == "null":
        corpus = synth_null_corpus(args.users // 2, args.users - args.users // 2, TweetMix(0.5), seed=args.seed)
    else:
        corpus = synth_author_corpus(
            args.users // 2,
            args.users - args.users // 2,
            TweetMix(args.p_third_a),
            TweetMix(args.p_third_b),
            seed=args.seed,
        )
    if args.format == "feeddir":
        write_feeddir(corpus, out)
    else:
        # per-author corpora go out unlabeled with a sibling truth file
        writer = write_jsonl if args.format == "jsonl" else write_tsv
        writer(corpus, out)
        if corpus.feeds and corpus.feeds[0].class_label is not None:
            write_truth(corpus, out.with_suffix(".truth.txt"))
    print(f"wrote {corpus.n_users} users / {corpus.n_tweets} tweets to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ingroup-index", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the full pipeline and write reports")
    _add_corpus_args(p)
    p.add_argument("--hypothesis", choices=sorted(HYPOTHESES), help="load a preset configuration")
    p.add_argument("--alternative", choices=["two-sided", "less", "greater"], default=None)
    p.add_argument("--no-continuity", action="store_true", help="disable continuity correction")
    p.add_argument("--ks-method", choices=["asymptotic", "monte-carlo"], default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--group-names", nargs=2, metavar=("LABEL1", "LABEL0"))
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("index", help="emit the per-user index TSV only")
    _add_corpus_args(p)
    p.add_argument("--hypothesis", choices=sorted(HYPOTHESES))
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("tag", help="dump token person tags for text")
    p.add_argument("text", nargs="*", help="texts to tag (default: lines from stdin)")
    p.add_argument("--lexicon")
    p.add_argument("--ambiguity", choices=["exclude", "third"], default="exclude")
    p.add_argument("--polite", choices=["second", "third"], default="second")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("selftest", help="check exact p-values against permutation enumeration")
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--seed", type=int, default=12345)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("synth", help="write a synthetic corpus")
    p.add_argument("--kind", choices=["authors", "null", "tweets"], default="authors")
    p.add_argument("--users", type=int, default=200)
    p.add_argument("--p-third-a", type=float, default=0.6, help="third-person share for label 1")
    p.add_argument("--p-third-b", type=float, default=0.4, help="third-person share for label 0")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["jsonl", "tsv", "feeddir"], default="jsonl")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (CorpusError, AnalysisError, StatsError, LexiconError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
