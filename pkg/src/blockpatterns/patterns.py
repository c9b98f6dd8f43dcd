"""Block signatures and the power / anti-power detectors built on them."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from math import comb, factorial
from typing import Iterator, Sequence, Union

import numpy as np

from . import _scan
from .words import Word, as_word, blocks


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class BlockSignature:
    """The vector (mu_1, ..., mu_k): ``mu[s-1]`` classes of ``s`` equal blocks."""

    mu: tuple[int, ...]

    def __post_init__(self):
        mu = tuple(int(x) for x in self.mu)
        object.__setattr__(self, "mu", mu)
        if not mu:
            raise SignatureError("signature needs k >= 1")
        if any(x < 0 for x in mu):
            raise SignatureError(f"negative entry in {mu}")
        if sum(s * x for s, x in enumerate(mu, 1)) != len(mu):
            raise SignatureError(f"{mu} does not satisfy sum s*mu_s = k = {len(mu)}")

    @property
    def k(self) -> int:
        return len(self.mu)

    @classmethod
    def power(cls, k: int) -> "BlockSignature":
        return cls((0,) * (k - 1) + (1,))

    @classmethod
    def anti_power(cls, k: int) -> "BlockSignature":
        return cls((k,) + (0,) * (k - 1))

    @classmethod
    def from_class_sizes(cls, k: int, sizes: Sequence[int]) -> "BlockSignature":
        mu = [0] * k
        for s in sizes:
            mu[s - 1] += 1
        return cls(tuple(mu))

    @cached_property
    def pair_count(self) -> int:
        return equal_pair_count(self)

    @property
    def classes(self) -> int:
        return sum(self.mu)

    @property
    def largest_class(self) -> int:
        return max(s for s, x in enumerate(self.mu, 1) if x)

    def partition_count(self) -> int:
        """Number of set partitions of the k block positions with this shape."""
        denom = 1
        for s, x in enumerate(self.mu, 1):
            denom *= factorial(x) * factorial(s) ** x
        return factorial(self.k) // denom

    def __str__(self) -> str:
        parts = [f"{s}:{x}" for s, x in reversed(list(enumerate(self.mu, 1))) if x]
        return f"k={self.k};" + ",".join(parts)

    @classmethod
    def parse(cls, text: str) -> "BlockSignature":
        """Accept the sparse form ``k=5;2:2,1:1`` or a dense list ``1,2,0,0,0``."""
        text = text.strip()
        sparse = re.fullmatch(r"k\s*=\s*(\d+)\s*;\s*(.*)", text)
        if sparse:
            k = int(sparse.group(1))
            mu = [0] * k
            body = sparse.group(2).strip()
            for item in filter(None, (t.strip() for t in body.split(","))):
                s, _, x = item.partition(":")
                s, x = int(s), int(x)
                if not 1 <= s <= k:
                    raise SignatureError(f"class size {s} outside 1..{k}")
                mu[s - 1] += x
            return cls(tuple(mu))
        dense = text.strip("()[] ")
        try:
            return cls(tuple(int(t) for t in dense.split(",")))
        except ValueError:
            raise SignatureError(f"cannot parse signature {text!r}") from None


def partitions(k: int) -> Iterator[BlockSignature]:
    """All signatures with block count ``k`` (one per integer partition of k)."""

    def parts(n: int, largest: int) -> Iterator[list[int]]:
        if n == 0:
            yield []
            return
        for s in range(min(n, largest), 0, -1):
            for rest in parts(n - s, s):
                yield [s] + rest

    for p in parts(k, k):
        yield BlockSignature.from_class_sizes(k, p)


def block_signature(w: Word | str, k: int) -> BlockSignature:
    sizes = Counter(b.letters for b in blocks(w, k)).values()
    return BlockSignature.from_class_sizes(k, sizes)


def equal_pair_count(sig: BlockSignature) -> int:
    return sum(x * comb(s, 2) for s, x in enumerate(sig.mu, 1))


def _blocks_or_none(w: Word, k: int) -> list[tuple[int, ...]] | None:
    n = len(w)
    if k < 1 or n == 0 or n % k:
        return None
    return [b.letters for b in blocks(w, k)]


def is_k_power(w: Word | str, k: int) -> bool:
    bl = _blocks_or_none(as_word(w), k)
    return bl is not None and all(b == bl[0] for b in bl)


def is_anti_power(w: Word | str, k: int) -> bool:
    bl = _blocks_or_none(as_word(w), k)
    return bl is not None and len(set(bl)) == k


def is_k_lambda_anti_power(w: Word | str, k: int, lam: int) -> bool:
    if not 1 <= lam <= k:
        raise ValueError(f"need 1 <= lambda <= k, got lambda={lam}, k={k}")
    bl = _blocks_or_none(as_word(w), k)
    return bl is not None and max(Counter(bl).values()) <= lam


# Factor predicates. Each has ``k`` blocks and a vectorized ``mask`` over
# block-id arrays of shape (..., k).

@dataclass(frozen=True)
class Power:
    k: int

    def mask(self, bids):
        return _scan.all_equal(bids)

    def __str__(self):
        return f"{self.k}-power"


@dataclass(frozen=True)
class AntiPower:
    k: int

    def mask(self, bids):
        return _scan.pair_counts(bids) == 0

    def __str__(self):
        return f"{self.k}-anti-power"


@dataclass(frozen=True)
class LambdaAntiPower:
    k: int
    lam: int

    def __post_init__(self):
        if not 1 <= self.lam <= self.k:
            raise ValueError(f"need 1 <= lambda <= k, got {self.lam}, {self.k}")

    def mask(self, bids):
        return _scan.max_class(bids) <= self.lam

    def __str__(self):
        return f"({self.k},{self.lam})-anti-power"


@dataclass(frozen=True)
class PairBudget:
    """Block-patterns with at most ``sigma`` unordered pairs of equal blocks."""

    k: int
    sigma: int

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("pair budget must be non-negative")

    def mask(self, bids):
        return _scan.pair_counts(bids) <= self.sigma

    def __str__(self):
        return f"k={self.k} pair budget {self.sigma}"


@dataclass(frozen=True)
class HasSignature:
    sig: BlockSignature

    @property
    def k(self) -> int:
        return self.sig.k

    def mask(self, bids):
        hist = _scan.class_histogram(bids)[..., 1:]
        return np.all(hist == np.asarray(self.sig.mu), axis=-1)

    def __str__(self):
        return f"signature {self.sig}"


Predicate = Union[Power, AntiPower, LambdaAntiPower, PairBudget, HasSignature]


def _as_array(w: Word | str) -> np.ndarray:
    return np.asarray(as_word(w).letters, dtype=np.int64)


def contains(w: Word | str, predicate: Predicate) -> tuple[int, int] | None:
    """First factor satisfying ``predicate`` as (1-based start, block length), or None.

    Matches are ordered by start position, then block length.
    """
    arr = _as_array(w)
    n, k = len(arr), predicate.k
    if n < k:
        return None
    ranks = _scan.FactorRanks(arr)
    best: tuple[int, int] | None = None
    for m in range(1, n // k + 1):
        count = n - k * m + 1
        if best is not None:
            count = min(count, best[0] - 1)
            if count <= 0:
                break
        bids = _scan.block_ids(ranks.ids(m)[:, :count + (k - 1) * m], m, k)
        hits = np.flatnonzero(predicate.mask(bids)[0])
        if hits.size:
            best = (int(hits[0]) + 1, m)
    return best


def count_matches(w: Word | str, predicate: Predicate) -> int:
    """Number of factor occurrences (i, j) satisfying ``predicate``."""
    arr = _as_array(w)
    n, k = len(arr), predicate.k
    if n < k:
        return 0
    ranks = _scan.FactorRanks(arr)
    return sum(int(predicate.mask(_scan.block_ids(ranks.ids(m), m, k)).sum())
               for m in range(1, n // k + 1))


def count_block_patterns(w: Word | str, mu: BlockSignature) -> int:
    return count_matches(w, HasSignature(mu))


def predicate_holds(w: Word | str, predicate: Predicate) -> bool:
    """Whether the whole word (split into ``predicate.k`` blocks) satisfies ``predicate``."""
    w = as_word(w)
    k = predicate.k
    if len(w) == 0 or len(w) % k:
        return False
    arr = _as_array(w)
    m = len(arr) // k
    ids = _scan.FactorRanks(arr).ids(m)
    return bool(predicate.mask(_scan.block_ids(ids, m, k))[0, 0])
