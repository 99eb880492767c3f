"""Worst |p_exact - p_normal| over every attainable statistic.

Walks the full exact null distribution for each Wilcoxon n and each MWU
(n_a, n_b) split, so the numbers are maxima, not samples.
"""

import argparse
import math

from ingroup_index.stats import _exact_from_counts, _normal_p, rank_sum_counts, signed_rank_counts


def wilcoxon_gap(n, alternative, continuity=True):
    counts = signed_rank_counts(n)
    mean = n * (n + 1) / 4
    sd = math.sqrt(n * (n + 1) * (2 * n + 1) / 24)
    return max(
        abs(_exact_from_counts(counts, w, alternative) - _normal_p(w - mean, sd, alternative, continuity)[1])
        for w in range(len(counts))
    )


def mwu_gap(n_a, n_b, alternative, continuity=True):
    counts = rank_sum_counts(n_a, n_b)
    mean = n_a * n_b / 2
    sd = math.sqrt(n_a * n_b * (n_a + n_b + 1) / 12)
    return max(
        abs(_exact_from_counts(counts, u, alternative) - _normal_p(u - mean, sd, alternative, continuity)[1])
        for u in range(len(counts))
    )


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--no-continuity", action="store_true")
    args = ap.parse_args(argv)
    cc = not args.no_continuity
    for alt in ("two-sided", "less"):
        print(f"== {alt}, continuity={cc}")
        print("wilcoxon n: " + "  ".join(f"{n}:{wilcoxon_gap(n, alt, cc):.4f}" for n in range(8, 26)))
        worst = max((mwu_gap(a, N - a, alt, cc), a, N - a) for N in range(12, 21) for a in range(1, N))
        balanced = max((mwu_gap(a, N - a, alt, cc), a, N - a) for N in range(12, 21) for a in range(4, N - 3))
        print(f"mwu worst any split: {worst[0]:.4f} at {worst[1]}v{worst[2]}")
        print(f"mwu worst with both groups >= 4: {balanced[0]:.4f} at {balanced[1]}v{balanced[2]}")


if __name__ == "__main__":
    main()
