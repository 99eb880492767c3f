"""Nonparametric tests: KS normality, Wilcoxon signed-rank, Mann-Whitney U.

Rank statistics are carried internally as doubled rank sums, which are
integers even with mid-ranks, so exact distributions are integer counts and
p-values are single correctly rounded divisions.
"""

from __future__ import annotations

import itertools
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import erfc, kolmogorov

ALTERNATIVES = ("two-sided", "less", "greater")

WILCOXON_EXACT_MAX_N = 25
MWU_EXACT_MAX_N = 20
ENUMERATION_LIMIT = 10**6
MC_BATCH = 10_000

LILLIEFORS_CAVEAT = (
    "normal parameters estimated from the sample; asymptotic Kolmogorov p-values "
    "are anti-conservative (no Lilliefors correction)"
)


class StatsError(ValueError):
    pass


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # keep pytest from collecting it

    method: str  # "ks-normality" | "wilcoxon-signed-rank" | "mann-whitney-u"
    statistic: float
    p_value: float
    alternative: str
    mode: str  # "exact" | "normal" | "asymptotic" | "monte-carlo"
    n: tuple[int, ...]
    z_value: float | None = None
    tie_count: int = 0
    zero_count: int = 0
    direction: str | None = None  # "less" | "greater" | "none"
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["n"] = list(self.n)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TestResult":
        d = dict(d)
        d["n"] = tuple(d["n"])
        d["details"] = dict(d.get("details", {}))
        return cls(**d)


@dataclass(frozen=True)
class Descriptives:
    label: str | None
    n: int
    median: float
    mean: float
    iqr: float
    mean_rank: float | None = None


# ---------------------------------------------------------------------------
# ranking and normal tails


def rank_doubled(values: Sequence[float]) -> tuple[list[int], list[int]]:
    """Twice the mid-ranks of ``values`` and the sizes of tied groups (> 1)."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0] * n
    ties = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        doubled = (i + 1) + (j + 1)  # twice the average of ranks i+1..j+1
        for k in range(i, j + 1):
            ranks[order[k]] = doubled
        if j > i:
            ties.append(j - i + 1)
        i = j + 1
    return ranks, ties


def rankdata(values: Sequence[float]) -> list[float]:
    """Mid-ranks, 1-based."""
    return [r / 2 for r in rank_doubled(values)[0]]


def norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def norm_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _check_alternative(alternative: str) -> None:
    if alternative not in ALTERNATIVES:
        raise StatsError(f"alternative must be one of {ALTERNATIVES}, got {alternative!r}")


def _direction(delta: float) -> str:
    return "less" if delta < 0 else "greater" if delta > 0 else "none"


def _normal_p(delta: float, sd: float, alternative: str, continuity: bool) -> tuple[float, float]:
    """z and p for an observed ``statistic - mean`` of ``delta``."""
    if sd == 0:
        return 0.0, 1.0
    if continuity:
        if alternative == "two-sided":
            delta = math.copysign(max(abs(delta) - 0.5, 0.0), delta)
        elif alternative == "less":
            delta += 0.5
        else:
            delta -= 0.5
    z = delta / sd
    if alternative == "two-sided":
        p = min(1.0, 2.0 * norm_sf(abs(z)))
    elif alternative == "less":
        p = norm_cdf(z)
    else:
        p = norm_sf(z)
    return z, p


def _tail_p(le: int, ge: int, total: int, alternative: str) -> float:
    if alternative == "less":
        return le / total
    if alternative == "greater":
        return ge / total
    return min(total, 2 * min(le, ge)) / total


# ---------------------------------------------------------------------------
# exact null distributions (counts indexed by doubled statistic / 2)


def signed_rank_counts(n: int) -> list[int]:
    """Number of sign patterns giving each W+ = 0..n(n+1)/2 for ranks 1..n."""
    counts = [1] + [0] * (n * (n + 1) // 2)
    top = 0
    for r in range(1, n + 1):
        top += r
        for w in range(top, r - 1, -1):
            counts[w] += counts[w - r]
    return counts


def rank_sum_counts(n_a: int, n_b: int) -> list[int]:
    """Number of n_a-subsets of ranks 1..N giving each U_a = 0..n_a*n_b."""
    N = n_a + n_b
    max_sum = sum(range(N - n_a + 1, N + 1))
    # table[k][s]: subsets of size k with rank sum s
    table = [[0] * (max_sum + 1) for _ in range(n_a + 1)]
    table[0][0] = 1
    for r in range(1, N + 1):
        for k in range(min(r, n_a), 0, -1):
            row, prev = table[k], table[k - 1]
            for s in range(max_sum, r - 1, -1):
                if prev[s - r]:
                    row[s] += prev[s - r]
    offset = n_a * (n_a + 1) // 2
    return table[n_a][offset : offset + n_a * n_b + 1]


def _exact_from_counts(counts: list[int], observed: int, alternative: str) -> float:
    total = sum(counts)
    le = sum(counts[: observed + 1])
    ge = sum(counts[observed:])
    return _tail_p(le, ge, total, alternative)


# ---------------------------------------------------------------------------
# tests


def wilcoxon_signed_rank(
    a: Sequence[float],
    b: Sequence[float],
    alternative: str = "two-sided",
    mode: str = "auto",
    continuity: bool = True,
) -> TestResult:
    """Signed-rank test on the paired differences ``a - b``.

    Zero differences are dropped (counted in ``zero_count``). The reported
    statistic is min(W+, W-). Exact when at most 25 non-zero differences and
    no tied magnitudes, unless ``mode`` forces "exact" or "normal".
    ``alternative="less"`` asks whether ``a`` tends to lie below ``b``.
    """
    _check_alternative(alternative)
    if len(a) != len(b):
        raise StatsError(f"paired samples differ in length ({len(a)} vs {len(b)})")
    diffs = [x - y for x, y in zip(a, b)]
    nonzero = [d for d in diffs if d != 0]
    zero_count = len(diffs) - len(nonzero)
    n = len(nonzero)
    if n == 0:
        raise StatsError("all paired differences are zero")
    ranks2, ties = rank_doubled([abs(d) for d in nonzero])
    w_plus2 = sum(r for r, d in zip(ranks2, nonzero) if d > 0)
    total2 = n * (n + 1)
    w_minus2 = total2 - w_plus2
    w_plus, w_minus = w_plus2 / 2, w_minus2 / 2
    mean = n * (n + 1) / 4

    if mode == "auto":
        mode = "exact" if n <= WILCOXON_EXACT_MAX_N and not ties else "normal"
    if mode == "exact":
        if ties:
            raise StatsError("exact signed-rank distribution needs untied magnitudes")
        p = _exact_from_counts(signed_rank_counts(n), w_plus2 // 2, alternative)
        z = None
    elif mode == "normal":
        var = n * (n + 1) * (2 * n + 1) / 24 - sum(t**3 - t for t in ties) / 48
        z, p = _normal_p(w_plus - mean, math.sqrt(var), alternative, continuity)
    else:
        raise StatsError(f"unknown mode {mode!r}")

    n_pos = sum(1 for d in nonzero if d > 0)
    details = {
        "w_plus": w_plus,
        "w_minus": w_minus,
        "n_positive": n_pos,
        "n_negative": n - n_pos,
        "mean_rank_positive": w_plus / n_pos if n_pos else None,
        "mean_rank_negative": w_minus / (n - n_pos) if n - n_pos else None,
        "continuity": continuity if mode == "normal" else None,
    }
    return TestResult(
        "wilcoxon-signed-rank",
        min(w_plus, w_minus),
        p,
        alternative,
        mode,
        (len(diffs),),
        z_value=z,
        tie_count=sum(ties),
        zero_count=zero_count,
        direction=_direction(w_plus - mean),
        details=details,
    )


def mann_whitney_u(
    a: Sequence[float],
    b: Sequence[float],
    alternative: str = "two-sided",
    mode: str = "auto",
    continuity: bool = True,
) -> TestResult:
    """Rank-sum test for independent samples.

    U_a counts pairs where ``a`` beats ``b`` (ties count half); the reported
    statistic is min(U_a, U_b). Exact when n_a + n_b <= 20 without ties.
    ``alternative="less"`` asks whether ``a`` tends to lie below ``b``.
    """
    _check_alternative(alternative)
    n_a, n_b = len(a), len(b)
    if n_a == 0 or n_b == 0:
        raise StatsError("both groups must be non-empty")
    N = n_a + n_b
    ranks2, ties = rank_doubled(list(a) + list(b))
    r_a2 = sum(ranks2[:n_a])
    u_a2 = r_a2 - n_a * (n_a + 1)
    u_a = u_a2 / 2
    u_b = n_a * n_b - u_a
    mean = n_a * n_b / 2

    if mode == "auto":
        mode = "exact" if N <= MWU_EXACT_MAX_N and not ties else "normal"
    if mode == "exact":
        if ties:
            raise StatsError("exact rank-sum distribution needs untied values")
        p = _exact_from_counts(rank_sum_counts(n_a, n_b), u_a2 // 2, alternative)
        z = None
    elif mode == "normal":
        tie_term = sum(t**3 - t for t in ties) / (N * (N - 1)) if N > 1 else 0.0
        var = n_a * n_b / 12 * ((N + 1) - tie_term)
        z, p = _normal_p(u_a - mean, math.sqrt(max(var, 0.0)), alternative, continuity)
    else:
        raise StatsError(f"unknown mode {mode!r}")

    details = {
        "u_a": u_a,
        "u_b": u_b,
        "rank_sum_a": r_a2 / 2,
        "mean_rank_a": r_a2 / 2 / n_a,
        "mean_rank_b": (N * (N + 1) - r_a2) / 2 / n_b,
        "continuity": continuity if mode == "normal" else None,
    }
    return TestResult(
        "mann-whitney-u",
        min(u_a, u_b),
        p,
        alternative,
        mode,
        (n_a, n_b),
        z_value=z,
        tie_count=sum(ties),
        direction=_direction(u_a - mean),
        details=details,
    )


def ks_statistic(samples: Sequence[float]) -> float:
    """sup |F_n - Phi((x - mean) / sd)| with sample mean and sd (ddof=1)."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    sd = float(np.std(x, ddof=1))
    z = (x - x.mean()) / sd
    cdf = np.array([norm_cdf(v) for v in z])
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))


def _ks_null(n: int, iterations: int, seed: int) -> np.ndarray:
    out = np.empty(iterations)
    done = 0
    batch = 0
    while done < iterations:
        m = min(max(1, 1_000_000 // n), iterations - done)
        rng = np.random.default_rng([seed, batch])
        sims = np.sort(rng.standard_normal((m, n)), axis=1)
        z = (sims - sims.mean(axis=1, keepdims=True)) / sims.std(axis=1, ddof=1, keepdims=True)
        cdf = 0.5 * erfc(-z / math.sqrt(2.0))
        i = np.arange(1, n + 1)
        d = np.maximum((i / n - cdf).max(axis=1), (cdf - (i - 1) / n).max(axis=1))
        out[done : done + m] = d
        done += m
        batch += 1
    return out


def ks_normality(
    samples: Sequence[float],
    method: str = "asymptotic",
    iterations: int = 9999,
    seed: int = 0,
) -> TestResult:
    """One-sample KS test against a normal fitted to the sample.

    ``method="asymptotic"`` reads p from the Kolmogorov limit distribution
    at sqrt(n) * D. ``method="monte-carlo"`` instead compares D with D
    simulated from normal samples whose parameters are re-estimated each
    time, which accounts for the estimation.
    """
    xs = [float(v) for v in samples]
    n = len(xs)
    if n < 4:
        raise StatsError(f"KS normality check needs at least 4 points, got {n}")
    if statistics.stdev(xs) == 0:
        raise StatsError("degenerate sample: standard deviation is zero")
    d = ks_statistic(xs)
    details = {"mean": statistics.fmean(xs), "sd": statistics.stdev(xs), "caveat": LILLIEFORS_CAVEAT}
    if method == "asymptotic":
        p = float(kolmogorov(math.sqrt(n) * d))
        mode = "asymptotic"
    elif method == "monte-carlo":
        null = _ks_null(n, iterations, seed)
        p = (int(np.sum(null >= d)) + 1) / (iterations + 1)
        mode = "monte-carlo"
        details.update(iterations=iterations, seed=seed, caveat="null simulated with estimated parameters")
    else:
        raise StatsError(f"unknown KS method {method!r}")
    return TestResult(
        "ks-normality",
        d,
        min(1.0, max(0.0, p)),
        "two-sided",
        mode,
        (n,),
        tie_count=sum(rank_doubled(xs)[1]),
        details=details,
    )


def descriptives(
    samples: Sequence[float],
    pooled_context: Sequence[float] | None = None,
    label: str | None = None,
) -> Descriptives:
    """Median, mean, IQR (type-7 quantiles) and, when ``pooled_context``
    holds the other group's values, the mean rank of ``samples`` within the
    pooled set."""
    xs = [float(v) for v in samples]
    if not xs:
        raise StatsError("descriptives of an empty sample")
    q1, q3 = np.percentile(xs, [25, 75])
    mean_rank = None
    if pooled_context is not None:
        ranks2, _ = rank_doubled(xs + [float(v) for v in pooled_context])
        mean_rank = sum(ranks2[: len(xs)]) / 2 / len(xs)
    return Descriptives(
        label,
        len(xs),
        float(statistics.median(xs)),
        math.fsum(xs) / len(xs),
        float(q3 - q1),
        mean_rank,
    )


# ---------------------------------------------------------------------------
# permutation oracle


def _le_ge(stats2: np.ndarray, observed2: int) -> tuple[int, int]:
    return int(np.sum(stats2 <= observed2)), int(np.sum(stats2 >= observed2))


def _mwu_space(n_a: int, n_b: int) -> int:
    return math.comb(n_a + n_b, n_a)


def exact_permutation_pvalue(
    test: str,
    data: tuple[Sequence[float], Sequence[float]],
    alternative: str = "two-sided",
    iterations: int = 100_000,
    seed: int = 0,
    workers: int = 1,
    max_enumeration: int = ENUMERATION_LIMIT,
) -> float:
    """Permutation p-value recomputed from ranks of the raw data.

    ``test`` is "mann-whitney-u" (``data`` = two groups, labels permuted) or
    "wilcoxon-signed-rank" (``data`` = paired samples, signs of the non-zero
    differences flipped). The permutation space is enumerated when it has at
    most ``max_enumeration`` elements, otherwise ``iterations`` random
    permutations are drawn in fixed batches seeded by ``(seed, batch)``, so
    the result does not depend on ``workers``.
    """
    _check_alternative(alternative)
    a, b = data
    if test == "mann-whitney-u":
        n_a, n_b = len(a), len(b)
        if n_a == 0 or n_b == 0:
            raise StatsError("both groups must be non-empty")
        ranks2 = np.array(rank_doubled(list(a) + list(b))[0], dtype=np.int64)
        observed = int(ranks2[:n_a].sum())
        if _mwu_space(n_a, n_b) <= max_enumeration:
            sums = np.fromiter(
                (sum(c) for c in itertools.combinations(ranks2.tolist(), n_a)),
                dtype=np.int64,
                count=_mwu_space(n_a, n_b),
            )
            le, ge = _le_ge(sums, observed)
            return _tail_p(le, ge, len(sums), alternative)

        def batch_counts(batch: int, m: int) -> tuple[int, int]:
            rng = np.random.default_rng([seed, batch])
            perms = rng.permuted(np.tile(ranks2, (m, 1)), axis=1)
            return _le_ge(perms[:, :n_a].sum(axis=1), observed)

    elif test == "wilcoxon-signed-rank":
        if len(a) != len(b):
            raise StatsError("paired samples differ in length")
        diffs = [x - y for x, y in zip(a, b) if x != y]
        n = len(diffs)
        if n == 0:
            raise StatsError("all paired differences are zero")
        ranks2 = np.array(rank_doubled([abs(d) for d in diffs])[0], dtype=np.int64)
        observed = int(sum(r for r, d in zip(ranks2.tolist(), diffs) if d > 0))
        if 2**n <= max_enumeration:
            patterns = (np.arange(2**n, dtype=np.int64)[:, None] >> np.arange(n)) & 1
            le, ge = _le_ge(patterns @ ranks2, observed)
            return _tail_p(le, ge, 2**n, alternative)

        def batch_counts(batch: int, m: int) -> tuple[int, int]:
            rng = np.random.default_rng([seed, batch])
            signs = rng.integers(0, 2, size=(m, n), dtype=np.int64)
            return _le_ge(signs @ ranks2, observed)

    else:
        raise StatsError(f"unknown test {test!r}")

    if iterations < 1:
        raise StatsError("Monte Carlo needs at least one iteration")
    sizes = [min(MC_BATCH, iterations - start) for start in range(0, iterations, MC_BATCH)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(batch_counts, range(len(sizes)), sizes))
    else:
        results = [batch_counts(i, m) for i, m in enumerate(sizes)]
    le = sum(r[0] for r in results)
    ge = sum(r[1] for r in results)
    return _tail_p(le, ge, iterations, alternative)
