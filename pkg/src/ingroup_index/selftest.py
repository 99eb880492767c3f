"""Exact-distribution checks against brute-force permutation enumeration."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .stats import exact_permutation_pvalue, mann_whitney_u, wilcoxon_signed_rank


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def _close(x: float, y: float, tol: float = 1e-12) -> bool:
    return abs(x - y) <= tol


def named_examples() -> list[Check]:
    checks = []
    d = [1, 2, 3, 4, 5]
    w = wilcoxon_signed_rank(d, [0] * 5)
    oracle = exact_permutation_pvalue("wilcoxon-signed-rank", (d, [0] * 5))
    checks.append(
        Check(
            "wilcoxon d={1..5}: W+=15, p=0.0625",
            w.details["w_plus"] == 15 and _close(w.p_value, 0.0625) and _close(oracle, 0.0625),
            f"W+={w.details['w_plus']} p={w.p_value!r} oracle={oracle!r}",
        )
    )
    d = [-1, -2, -3, -4, -5, -6]
    w = wilcoxon_signed_rank(d, [0] * 6)
    checks.append(
        Check(
            "wilcoxon d={-1..-6}: p=0.03125, direction less",
            _close(w.p_value, 0.03125) and w.direction == "less",
            f"p={w.p_value!r} direction={w.direction}",
        )
    )
    u = mann_whitney_u([1, 2, 3], [4, 5, 6])
    oracle = exact_permutation_pvalue("mann-whitney-u", ([1, 2, 3], [4, 5, 6]))
    checks.append(
        Check(
            "mann-whitney {1,2,3} vs {4,5,6}: U=0, p=0.1",
            u.statistic == 0 and u.details["u_a"] == 0 and _close(u.p_value, 0.1) and _close(oracle, 0.1),
            f"U={u.statistic} p={u.p_value!r} oracle={oracle!r}",
        )
    )
    return checks


def _distinct(rng: random.Random, k: int) -> list[float]:
    # distinct magnitudes on a grid keep the inputs tie-free
    return [v / 8 for v in rng.sample(range(1, 400), k)]


def random_wilcoxon_case(rng: random.Random, n_max: int = 10):
    n = rng.randint(1, n_max)
    mags = _distinct(rng, n)
    shift = rng.choice([0.0, 0.5, 1.0])
    diffs = [m if rng.random() < 0.5 + shift / 3 else -m for m in mags]
    b = [round(rng.uniform(-5, 5), 3) for _ in range(n)]
    return [x + y for x, y in zip(diffs, b)], b


def random_mwu_case(rng: random.Random, max_group: int = 6):
    n_a, n_b = rng.randint(1, max_group), rng.randint(1, max_group)
    values = _distinct(rng, n_a + n_b)
    shift = rng.choice([0.0, 5.0625, 15.0625])  # off the 1/8 grid: no cross-group ties
    return [v - shift for v in values[:n_a]], values[n_a:]


def oracle_cases(n_cases: int = 200, seed: int = 12345) -> list[Check]:
    """Exact-mode p equals full-enumeration p (1e-12) on random tie-free
    inputs, for all three alternatives."""
    rng = random.Random(seed)
    checks = []
    worst = 0.0
    failures = 0
    for i in range(n_cases):
        if i % 2 == 0:
            a, b = random_wilcoxon_case(rng)
            test, fn = "wilcoxon-signed-rank", wilcoxon_signed_rank
        else:
            a, b = random_mwu_case(rng)
            test, fn = "mann-whitney-u", mann_whitney_u
        for alt in ("two-sided", "less", "greater"):
            p = fn(a, b, alt, mode="exact").p_value
            q = exact_permutation_pvalue(test, (a, b), alt)
            worst = max(worst, abs(p - q))
            if not _close(p, q):
                failures += 1
    checks.append(
        Check(
            f"exact vs enumeration on {n_cases} random cases",
            failures == 0,
            f"max |diff| = {worst:.3g}, failures = {failures}",
        )
    )
    return checks


def run_selftest(n_cases: int = 200, seed: int = 12345) -> list[Check]:
    return named_examples() + oracle_cases(n_cases, seed)
