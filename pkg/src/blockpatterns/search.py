"""Exhaustive search for the longest words avoiding a power and a block family.

For an alphabet of size ``alpha``, the threshold is the least length ``N``
such that every word of length ``N`` contains an ``ell``-power or a forbidden
``k``-block factor. The search walks words in first-occurrence canonical form
(each new letter is at most one more than the largest letter so far), which
is sound because both forbidden families are closed under renaming letters.
"""

from __future__ import annotations

import itertools
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import _kernel
from .patterns import AntiPower, LambdaAntiPower, PairBudget, Power, contains, is_k_power, predicate_holds
from .words import Word, as_word

log = logging.getLogger(__name__)

CHUNK = 1 << 20
DEFAULT_SPLIT_DEPTH = 8


class SearchError(RuntimeError):
    pass


class Inconclusive(SearchError):
    """The search hit its length or time cap before exhausting the tree."""


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class AvoidanceSpec:
    """Forbid ``ell``-powers and one k-block family.

    Give ``lam`` to forbid (k, lam)-anti-powers (``lam=1``: k-anti-powers) or
    ``sigma`` to forbid block-patterns with at most ``sigma`` equal block pairs.
    """

    alpha: int
    ell: int
    k: int
    lam: int | None = 1
    sigma: int | None = None

    def __post_init__(self):
        if self.alpha < 1 or self.ell < 2 or self.k < 2:
            raise ValueError("need alpha >= 1, ell >= 2, k >= 2")
        if self.sigma is not None:
            object.__setattr__(self, "lam", None)
            if self.sigma < 0:
                raise ValueError("sigma must be non-negative")
        elif self.lam is None or not 1 <= self.lam <= self.k:
            raise ValueError(f"need 1 <= lambda <= k, got {self.lam}")

    @property
    def mode(self) -> int:
        return _kernel.MODE_LAMBDA if self.sigma is None else _kernel.MODE_BUDGET

    @property
    def bound(self) -> int:
        return self.lam if self.sigma is None else self.sigma

    @property
    def power(self) -> Power:
        return Power(self.ell)

    @property
    def constraint(self):
        if self.sigma is not None:
            return PairBudget(self.k, self.sigma)
        if self.lam == 1:
            return AntiPower(self.k)
        return LambdaAntiPower(self.k, self.lam)

    def default_cap(self) -> int:
        """Length by which every word must contain a forbidden factor.

        With ``beta = floor(C(k,2) / sigma)`` (``sigma = C(lam+1, 2)`` in
        lambda mode), any word of length ``k * beta * (ell*(k-1) + 1)`` has an
        ``ell``-power or a block-pattern with at most ``sigma`` equal pairs.
        For ``ell = k`` this is ``beta * (k^3 - k^2 + k)``.
        """
        sigma = comb(self.lam + 1, 2) if self.sigma is None else max(self.sigma, 1)
        beta = max(comb(self.k, 2) // sigma, 1)
        return self.k * beta * (self.ell * (self.k - 1) + 1)

    def __str__(self) -> str:
        return f"alpha={self.alpha}, {self.ell}-powers, {self.constraint}"


@dataclass
class SearchResult:
    threshold: int
    witness: Word
    nodes_explored: int
    truncated: bool
    elapsed: float = 0.0
    spec: AvoidanceSpec | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "threshold": self.threshold,
            "witness": str(self.witness),
            "nodes": self.nodes_explored,
            "truncated": self.truncated,
            "elapsed_ms": round(self.elapsed * 1000, 3),
        }


def _threads() -> int:
    env = os.environ.get("BP_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


class _Subtree:
    """Resumable search below a fixed canonical prefix."""

    def __init__(self, spec: AvoidanceSpec, cap: int, prefix: np.ndarray):
        self.spec, self.cap, self.root = spec, cap, len(prefix)
        size = min(cap + 1, max(64, 2 * len(prefix)))
        self.state = _kernel.new_state(size)
        _kernel.prepare(prefix, cap, *self.state)
        self.status = _kernel.PAUSED

    def step(self, budget: int) -> int:
        s = self.spec
        while True:
            self.status = _kernel.search_chunk(s.alpha, s.ell, s.k, s.mode, s.bound, self.cap,
                                               self.root, *self.state, budget)
            if self.status != _kernel.NEED_ROOM:
                return self.status
            size = min(self.cap + 1, 2 * len(self.state[0]))
            self.state = _kernel.grow_state(self.state, size)

    def run(self, deadline: float | None) -> "_Subtree":
        while self.step(CHUNK) == _kernel.PAUSED:
            if deadline is not None and time.monotonic() > deadline:
                break
        return self

    @property
    def best(self) -> int:
        return int(self.state[-1][_kernel.BEST])

    @property
    def nodes(self) -> int:
        return int(self.state[-1][_kernel.NODES])

    @property
    def witness(self) -> tuple[int, ...]:
        return tuple(int(a) for a in self.state[4][:self.best])


def _frontier(spec: AvoidanceSpec, depth: int, cap: int):
    """Canonical avoiding prefixes of length ``depth`` in lexicographic order.

    Also returns the longest avoiding word met above that depth and the
    number of letters tried.
    """
    out: list[np.ndarray] = []
    best: tuple[int, ...] = ()
    nodes = 0
    w = np.zeros(max(depth, 1), np.int64)

    def grow(p: int, top: int):
        nonlocal best, nodes
        if p == depth:
            out.append(w[:p].copy())
            return
        for c in range(min(top + 1, spec.alpha - 1) + 1):
            nodes += 1
            w[p] = c
            if _kernel.tail_violation(w, p + 1, spec.ell, spec.k, spec.mode, spec.bound):
                continue
            if p + 1 > len(best):
                best = tuple(int(a) for a in w[:p + 1])
            grow(p + 1, max(top, c))

    grow(0, -1)
    return out, best, nodes


def _verify(spec: AvoidanceSpec, w: Word) -> None:
    if contains(w, spec.power) is not None or contains(w, spec.constraint) is not None:
        raise SearchError(f"search produced a non-avoiding witness {w}")


def max_avoiding_length(spec: AvoidanceSpec, length_cap: int | None = None,
                        time_cap: float | None = None, threads: int | None = None,
                        split_depth: int = DEFAULT_SPLIT_DEPTH) -> SearchResult:
    """Depth-first search for the longest canonical word avoiding both families.

    The witness is the lexicographically least longest avoiding word in
    canonical form. When a cap is hit the result is a lower bound and
    ``truncated`` is set.
    """
    cap = spec.default_cap() if length_cap is None else length_cap
    if cap < 1:
        raise ValueError("length cap must be positive")
    threads = _threads() if threads is None else max(1, threads)
    t0 = time.monotonic()
    deadline = None if time_cap is None else t0 + time_cap

    if threads == 1 or split_depth >= cap:
        roots = [np.zeros(0, np.int64)]
        best, nodes = (), 0
    else:
        roots, best, nodes = _frontier(spec, split_depth, cap)
    log.debug("search %s: %d subtrees, cap %d", spec, len(roots), cap)

    def explore(prefix):
        return _Subtree(spec, cap, prefix).run(deadline)

    if threads == 1 or len(roots) <= 1:
        results = [explore(r) for r in roots]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(explore, roots))

    truncated = False
    for sub in results:  # roots are in lexicographic order: first longest wins
        nodes += sub.nodes
        if sub.status != _kernel.DONE:
            truncated = True
        if sub.best > len(best):
            best = sub.witness
    witness = Word(best, spec.alpha)
    _verify(spec, witness)
    return SearchResult(len(best) + 1, witness, nodes, truncated, time.monotonic() - t0, spec)


def n_alpha(ell: int, k: int, alpha: int, length_cap: int | None = None,
            time_cap: float | None = None, lam: int = 1, threads: int | None = None) -> int:
    """Exact N_alpha(ell, k) (with (k, lam)-anti-powers); raises ``Inconclusive`` on a cap."""
    res = max_avoiding_length(AvoidanceSpec(alpha, ell, k, lam), length_cap, time_cap, threads)
    if res.truncated:
        raise Inconclusive(f"search stopped early; threshold >= {res.threshold}")
    return res.threshold


def bound_check(k: int, n_value: int) -> bool:
    """``2k^2 - 2k <= n_value <= (k^3 - k^2 + k) C(k,2)``."""
    return 2 * k * k - 2 * k <= n_value <= (k**3 - k**2 + k) * comb(k, 2)


def no_extension_condition(k: int, alpha: int, n_value: int) -> bool:
    """``alpha > n_value / k - k + 3``, compared exactly.

    Under this condition a word with a proper factor of length
    ``N_alpha(k,k) - 1`` over ``alpha`` letters cannot avoid both k-powers
    and k-anti-powers.
    """
    return Fraction(alpha) > Fraction(n_value, k) - k + 3


def avoids(w: Word | str, spec: AvoidanceSpec) -> bool:
    w = as_word(w)
    return contains(w, spec.power) is None and contains(w, spec.constraint) is None


@dataclass(frozen=True)
class LeftExtensions:
    """Letters ``a`` for which ``a w`` still avoids, and why the others fail.

    ``fresh`` is the one letter beyond the alphabet that is also offered.
    Exclusion causes are ``"power-prefix"`` and ``"block-prefix"``.
    """

    allowed: frozenset[int]
    excluded: dict[int, tuple[str, ...]]
    fresh: int


def extendable_left(w: Word | str, spec: AvoidanceSpec) -> LeftExtensions:
    w = as_word(w, spec.alpha)
    if any(a >= spec.alpha for a in w.letters):
        raise PreconditionViolated(f"{w} uses letters outside an alphabet of size {spec.alpha}")
    if not avoids(w, spec):
        raise PreconditionViolated(f"{w} does not avoid {spec}")
    allowed, excluded = set(), {}
    for a in range(spec.alpha + 1):
        aw = Word((a,) + w.letters, spec.alpha + 1)
        causes = []
        # every new factor of a w is a prefix
        if any(is_k_power(aw[:spec.ell * m], spec.ell) for m in range(1, len(aw) // spec.ell + 1)):
            causes.append("power-prefix")
        if any(predicate_holds(aw[:spec.k * m], spec.constraint) for m in range(1, len(aw) // spec.k + 1)):
            causes.append("block-prefix")
        if causes:
            excluded[a] = tuple(causes)
        else:
            allowed.add(a)
    return LeftExtensions(frozenset(allowed), excluded, spec.alpha)


def exhaustive_threshold(spec: AvoidanceSpec, max_length: int) -> int | None:
    """Threshold by plain enumeration of every word (no pruning, no symmetry).

    Returns None if some word of length ``max_length`` still avoids.
    """
    for n in range(1, max_length + 1):
        if not any(avoids(Word(t, spec.alpha), spec)
                   for t in itertools.product(range(spec.alpha), repeat=n)):
            return n
    return None


def canonical_form(w: Word | str) -> Word:
    """Relabel letters in order of first occurrence: 0, 1, 2, ..."""
    w = as_word(w)
    names: dict[int, int] = {}
    letters = tuple(names.setdefault(a, len(names)) for a in w.letters)
    return Word(letters, w.alphabet_size)
