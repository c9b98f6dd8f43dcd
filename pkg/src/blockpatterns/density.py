"""Prefix sets AP(x, k, lambda) and D(x, k, sigma) with finite density proxies.

True lower and upper densities are limits; from a finite scan only the
minimum and maximum of ``|S & [n]| / n`` over a tail window are reported,
and every output labels them as proxies.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from . import _scan
from .words import InfiniteWord


@dataclass(frozen=True)
class PrefixSet:
    members: tuple[int, ...]
    n_max: int
    kind: str  # "AP" or "D"
    k: int
    param: int  # lambda for AP, sigma for D

    def __contains__(self, m: int) -> bool:
        return m in set(self.members)

    def as_set(self) -> set[int]:
        return set(self.members)

    def complement(self) -> set[int]:
        return set(range(1, self.n_max + 1)) - self.as_set()


@dataclass(frozen=True)
class DensityEstimate:
    ratios: tuple[float, ...]
    lower_proxy: float
    upper_proxy: float
    window: tuple[int, int]


def _prefix_block_ids(x: InfiniteWord, k: int, n_max: int) -> list[np.ndarray]:
    """Block ids of the length-km prefix, for m = 1..n_max."""
    arr = np.asarray(x.prefix(k * n_max).letters, dtype=np.int64)
    ranks = _scan.FactorRanks(arr)
    start = np.zeros(1, dtype=np.int64)
    return [_scan.block_ids(ranks.ids(m), m, k, start)[0, 0] for m in range(1, n_max + 1)]


def ap_set(x: InfiniteWord, k: int, lam: int, n_max: int) -> PrefixSet:
    """m such that the prefix of length km is a (k, lam)-anti-power."""
    if not 1 <= lam <= k:
        raise ValueError(f"need 1 <= lambda <= k, got {lam}")
    if n_max < 1:
        raise ValueError("n_max must be positive")
    members = tuple(m for m, b in enumerate(_prefix_block_ids(x, k, n_max), 1)
                    if _scan.max_class(b) <= lam)
    return PrefixSet(members, n_max, "AP", k, lam)


def d_set(x: InfiniteWord, k: int, sigma: int, n_max: int) -> PrefixSet:
    """m such that the length-km prefix has at most ``sigma`` equal block pairs."""
    if sigma < 0 or n_max < 1:
        raise ValueError("need sigma >= 0 and n_max >= 1")
    members = tuple(m for m, b in enumerate(_prefix_block_ids(x, k, n_max), 1)
                    if _scan.pair_counts(b) <= sigma)
    return PrefixSet(members, n_max, "D", k, sigma)


def density_estimate(s: PrefixSet, window_start: int | None = None) -> DensityEstimate:
    """Ratios |S & [n]|/n for n = 1..n_max; proxies over [ceil(n_max/2), n_max] by default."""
    if s.n_max < 2:
        raise ValueError("need n_max >= 2")
    lo = ceil(s.n_max / 2) if window_start is None else window_start
    if not 1 <= lo <= s.n_max:
        raise ValueError(f"window start {lo} outside 1..{s.n_max}")
    hits = np.zeros(s.n_max + 1, dtype=np.int64)
    hits[list(s.members)] = 1
    counts = np.cumsum(hits)[1:]
    ratios = counts / np.arange(1, s.n_max + 1)
    tail = ratios[lo - 1:]
    return DensityEstimate(tuple(float(r) for r in ratios), float(tail.min()), float(tail.max()),
                           (lo, s.n_max))


def minimal_antipower_prefix(x: InfiniteWord, k: int, bound: int) -> int | None:
    """Least m <= bound whose length-km prefix is a k-anti-power."""
    for m, b in enumerate(_prefix_block_ids(x, k, bound), 1):
        if _scan.pair_counts(b) == 0:
            return m
    return None


def report(s: PrefixSet, est: DensityEstimate | None = None) -> dict:
    est = est or density_estimate(s)
    out = {"kind": s.kind, "k": s.k}
    out["lambda" if s.kind == "AP" else "sigma"] = s.param
    out.update({
        "n_max": s.n_max,
        "members": list(s.members),
        "lower_proxy": est.lower_proxy,
        "upper_proxy": est.upper_proxy,
    })
    return out
