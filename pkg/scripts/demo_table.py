"""Render group tables for the three hypothesis presets on synthetic data.

H1 runs on a per-tweet corpus (matched splits), H2 and H3 on per-author
corpora; H2's corpus spans 80-160 tweets per user so its size filter bites.
"""

import argparse
from pathlib import Path

from ingroup_index.report import hypothesis_config, render_table, run_analysis, write_outputs
from ingroup_index.synth import synth_author_corpus, synth_tweet_corpus


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", default="text", choices=["text", "markdown", "tsv", "json"])
    ap.add_argument("--out", help="write full outputs per hypothesis under this directory")
    args = ap.parse_args(argv)

    corpora = {
        "H1": synth_tweet_corpus(n_authors=100, seed=args.seed),
        "H2": synth_author_corpus(100, 100, tweets_per_user=(80, 160), seed=args.seed),
        "H3": synth_author_corpus(100, 100, seed=args.seed),
    }
    for name, corpus in corpora.items():
        report = run_analysis(hypothesis_config(name, "<synthetic>", "jsonl"), corpus)
        print(f"### {name}")
        print(render_table(report, args.format))
        if args.out:
            write_outputs(report, Path(args.out) / name)


if __name__ == "__main__":
    main()
