"""Vectorized factor scans.

Equality of length-``m`` factors is decided exactly through rank tables built
by prefix doubling: two factors of length ``m`` are equal iff their two
overlapping windows of length ``2**floor(log2 m)`` are equal. Every array here
is 2-D, one row per word, so a batch of equal-length words is scanned at once.
"""

from __future__ import annotations

import numpy as np


class FactorRanks:
    """Exact ids for all factors of a batch of equal-length words."""

    def __init__(self, rows: np.ndarray):
        rows = np.atleast_2d(np.asarray(rows))
        self.batch, self.n = rows.shape
        _, inv = np.unique(rows, return_inverse=True)
        self._base = np.int64(self.batch * self.n + 1)
        self._ranks = [inv.reshape(rows.shape).astype(np.int64)]

    def _rank(self, p: int) -> np.ndarray:
        # ranks of windows of length 2**p
        while len(self._ranks) <= p:
            q = len(self._ranks) - 1
            half = 1 << q
            prev = self._ranks[q]
            width = prev.shape[1] - half
            key = prev[:, :width] * self._base + prev[:, half:half + width]
            _, inv = np.unique(key, return_inverse=True)
            self._ranks.append(inv.reshape(key.shape).astype(np.int64))
        return self._ranks[p]

    def ids(self, m: int) -> np.ndarray:
        """Array of shape (batch, n - m + 1): equal entries in a row mean equal factors."""
        p = m.bit_length() - 1
        r = self._rank(p)
        width = self.n - m + 1
        shift = m - (1 << p)
        if shift == 0:
            return r[:, :width]
        return r[:, :width] * self._base + r[:, shift:shift + width]


def block_ids(ids: np.ndarray, m: int, k: int, starts: np.ndarray | None = None) -> np.ndarray:
    """Block ids of every length-``km`` factor; shape (batch, starts, k).

    ``ids`` must come from ``FactorRanks.ids(m)``. By default every start
    position ``0 .. n - km`` is taken.
    """
    if starts is None:
        count = ids.shape[1] - (k - 1) * m
        if count <= 0:
            return np.empty((ids.shape[0], 0, k), dtype=ids.dtype)
        return np.stack([ids[:, j * m:j * m + count] for j in range(k)], axis=2)
    return np.stack([ids[:, starts + j * m] for j in range(k)], axis=2)


def class_histogram(bids: np.ndarray) -> np.ndarray:
    """``hist[..., s]`` = number of equality classes of size ``s`` among the k blocks."""
    k = bids.shape[-1]
    srt = np.sort(bids, axis=-1)
    hist = np.zeros(srt.shape[:-1] + (k + 1,), dtype=np.int64)
    sizes = np.arange(k + 1)
    cur = np.ones(srt.shape[:-1], dtype=np.int64)
    for j in range(1, k + 1):
        if j < k:
            same = srt[..., j] == srt[..., j - 1]
        else:
            same = np.zeros(srt.shape[:-1], dtype=bool)
        closing = ~same
        hist += (cur[..., None] == sizes) & closing[..., None]
        cur = np.where(same, cur + 1, 1)
    return hist


def pair_counts(bids: np.ndarray) -> np.ndarray:
    """Number of unordered equal block pairs per factor."""
    k = bids.shape[-1]
    total = np.zeros(bids.shape[:-1], dtype=np.int64)
    for i in range(k):
        for j in range(i + 1, k):
            total += bids[..., i] == bids[..., j]
    return total


def max_class(bids: np.ndarray) -> np.ndarray:
    k = bids.shape[-1]
    best = np.ones(bids.shape[:-1], dtype=np.int64)
    for i in range(k):
        c = np.zeros(bids.shape[:-1], dtype=np.int64)
        for j in range(k):
            c += bids[..., i] == bids[..., j]
        best = np.maximum(best, c)
    return best


def all_equal(bids: np.ndarray) -> np.ndarray:
    return np.all(bids == bids[..., :1], axis=-1)
