"""Expected numbers of block-patterns, powers and anti-powers in random words.

A word of length ``n`` is drawn uniformly from ``alpha**n`` words. The
closed forms sum, over block lengths ``m``, the ``n + 1 - km`` positions
times the probability that ``k`` random blocks of length ``m`` have the
requested equality pattern.
"""

from __future__ import annotations

import itertools
import math
import statistics
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _scan
from .patterns import BlockSignature, HasSignature

Z99 = statistics.NormalDist().inv_cdf(0.995)
ORACLE_LIMIT = 10**7
MC_CHUNK = 4096


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ExpectationQuery:
    n: int
    k: int
    alpha: int
    mu: BlockSignature

    def __post_init__(self):
        if self.mu.k != self.k:
            raise ValueError(f"signature has k={self.mu.k}, query has k={self.k}")
        if self.n < 1 or self.alpha < 2 or not 1 <= self.k <= self.n:
            raise ValueError("need n >= 1, alpha >= 2 and 1 <= k <= n")


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    ci99: float
    trials: int
    seed: int

    def covers(self, value: float) -> bool:
        return abs(self.mean - value) <= self.ci99


@dataclass(frozen=True)
class ExpectationReport:
    closed_form: float
    oracle: Fraction | None = None
    monte_carlo: MonteCarloEstimate | None = None

    def to_json(self) -> dict:
        mc = None
        if self.monte_carlo is not None:
            e = self.monte_carlo
            mc = {"mean": e.mean, "ci99": e.ci99, "trials": e.trials, "seed": e.seed}
        oracle = None if self.oracle is None else f"{self.oracle.numerator}/{self.oracle.denominator}"
        return {"closed_form": self.closed_form, "oracle": oracle, "mc": mc}


def pattern_probability(mu: BlockSignature, m: int, alpha: int) -> Fraction:
    """Probability that k uniform blocks of length m have signature ``mu``.

    (number of set partitions of the k positions with shape mu) times the
    falling factorial (alpha^m)_(classes), over alpha^(km).
    """
    words = alpha**m
    falling = math.prod(words - i for i in range(mu.classes))
    return Fraction(mu.partition_count() * falling, words**mu.k)


def expected_block_patterns_exact(q: ExpectationQuery) -> Fraction:
    return sum((Fraction(q.n + 1 - q.k * m) * pattern_probability(q.mu, m, q.alpha)
                for m in range(1, q.n // q.k + 1)), Fraction(0))


def expected_block_patterns(q: ExpectationQuery) -> float:
    return float(expected_block_patterns_exact(q))


def expected_k_powers_closed(n: int, k: int, alpha: int) -> float:
    """Closed form for the expected number of k-power factors (geometric sums done)."""
    if k < 2 or n < k or alpha < 2:
        raise ValueError("need k >= 2, n >= k, alpha >= 2")
    r = float(alpha) ** (1 - k)
    f = n // k
    one = 1 - r
    first = (n + 1) * r * (1 - r**f) / one
    bracket = 1 / one - f * r**f / one + r * (1 - r ** (f - 1)) / one**2
    return first - k * r * bracket


def expected_anti_powers(n: int, k: int, alpha: int) -> float:
    if k < 1 or n < 1 or alpha < 2:
        raise ValueError("need k >= 1, n >= 1, alpha >= 2")
    total = Fraction(0)
    for m in range(1, n // k + 1):
        words = alpha**m
        total += (n + 1 - k * m) * Fraction(math.prod(words - i for i in range(k)), words**k)
    return float(total)


@lru_cache(maxsize=256)
def _signature_totals(n: int, k: int, alpha: int) -> Counter:
    """Sum over all alpha^n words of the number of factors with each signature."""
    totals: Counter = Counter()
    for word in itertools.product(range(alpha), repeat=n):
        for m in range(1, n // k + 1):
            for s in range(n - k * m + 1):
                sizes = Counter(word[s + j * m:s + (j + 1) * m] for j in range(k)).values()
                totals[tuple(sorted(sizes))] += 1
    return totals


def brute_force_expectation(q: ExpectationQuery) -> Fraction:
    """Exact average count over every word of length n (independent of the closed form)."""
    if q.alpha**q.n > ORACLE_LIMIT:
        raise TooLarge(f"{q.alpha}^{q.n} words exceed the enumeration limit {ORACLE_LIMIT}")
    sizes = tuple(sorted(s for s, x in enumerate(q.mu.mu, 1) for _ in range(x)))
    return Fraction(_signature_totals(q.n, q.k, q.alpha)[sizes], q.alpha**q.n)


def _mc_chunk(q: ExpectationQuery, seed_seq: np.random.SeedSequence, size: int) -> tuple[int, int]:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    rows = rng.integers(0, q.alpha, size=(size, q.n), dtype=np.int64)
    ranks = _scan.FactorRanks(rows)
    pred = HasSignature(q.mu)
    counts = np.zeros(size, dtype=np.int64)
    for m in range(1, q.n // q.k + 1):
        counts += pred.mask(_scan.block_ids(ranks.ids(m), m, q.k)).sum(axis=1)
    return int(counts.sum()), int((counts * counts).sum())


def monte_carlo_expectation(q: ExpectationQuery, trials: int, seed: int,
                            threads: int = 1) -> MonteCarloEstimate:
    """Sample mean of the pattern count with a 99% normal-approximation half-width.

    Trials are split into fixed-size chunks, each seeded from
    ``SeedSequence(seed).spawn``, so the result does not depend on ``threads``.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials")
    sizes = [MC_CHUNK] * (trials // MC_CHUNK)
    if trials % MC_CHUNK:
        sizes.append(trials % MC_CHUNK)
    seeds = np.random.SeedSequence(seed & (2**64 - 1)).spawn(len(sizes))
    jobs = list(zip(seeds, sizes))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: _mc_chunk(q, *job), jobs))
    else:
        parts = [_mc_chunk(q, *job) for job in jobs]
    total = sum(p[0] for p in parts)
    squares = sum(p[1] for p in parts)
    mean = Fraction(total, trials)
    var = (Fraction(squares, trials) - mean * mean) * Fraction(trials, trials - 1)
    return MonteCarloEstimate(float(mean), Z99 * math.sqrt(float(var) / trials), trials, seed)


def report(q: ExpectationQuery, oracle: bool = False, trials: int | None = None,
           seed: int = 0, threads: int = 1) -> ExpectationReport:
    exact = brute_force_expectation(q) if oracle else None
    mc = monte_carlo_expectation(q, trials, seed, threads) if trials else None
    return ExpectationReport(expected_block_patterns(q), exact, mc)
