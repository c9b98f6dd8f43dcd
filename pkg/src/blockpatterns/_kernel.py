"""Compiled depth-first search over canonical words.

Words are grown one letter at a time. ``run[p, d]`` is the length of the
longest run of positions ending at ``p`` with ``w[i] == w[i - d]``, so two
blocks of length ``m`` at distance ``d`` ending at ``e`` are equal iff
``run[e, d] >= m``. That makes every block comparison O(1).

Constraint modes for the k-block family:
    MODE_BUDGET  forbidden iff the number of equal block pairs <= bound
    MODE_LAMBDA  forbidden iff every equality class has size <= bound
"""

from __future__ import annotations

import numba as nb
import numpy as np

MODE_BUDGET = 0
MODE_LAMBDA = 1

DONE = 0
PAUSED = 1
CAP_REACHED = 2
NEED_ROOM = 3

# st slots
P, BEST, NODES = 0, 1, 2


@nb.njit(cache=True, nogil=True)
def _update_run(w, run, p):
    for d in range(1, p + 1):
        if w[p] == w[p - d]:
            run[p, d] = run[p - 1, d] + 1 if p - 1 - d >= 0 else 1
        else:
            run[p, d] = 0


@nb.njit(cache=True, nogil=True)
def _tail_forbidden(run, p, ell, k, mode, bound):
    n = p + 1
    for m in range(1, n // ell + 1):
        if run[p, m] >= (ell - 1) * m:
            return True
    for m in range(1, n // k + 1):
        s = n - k * m
        if mode == MODE_BUDGET:
            pairs = 0
            for i in range(k - 1):
                for j in range(i + 1, k):
                    if run[s + (j + 1) * m - 1, (j - i) * m] >= m:
                        pairs += 1
                if pairs > bound:
                    break
            if pairs <= bound:
                return True
        else:
            ok = True  # every class <= bound so far
            for i in range(k):
                size = 1
                for j in range(k):
                    if j == i:
                        continue
                    a = i if i < j else j
                    b = j if i < j else i
                    if run[s + (b + 1) * m - 1, (b - a) * m] >= m:
                        size += 1
                if size > bound:
                    ok = False
                    break
            if ok:
                return True
    return False


@nb.njit(cache=True, nogil=True)
def prepare(prefix, cap, w, run, nxt, mx, witness, st):
    """Load a valid canonical prefix as the fixed root of a search."""
    r = prefix.shape[0]
    top = -1
    for p in range(r):
        w[p] = prefix[p]
        _update_run(w, run, p)
        mx[p] = top
        if prefix[p] > top:
            top = prefix[p]
        witness[p] = prefix[p]
    mx[r] = top
    nxt[r] = 0
    st[P] = r
    st[BEST] = r
    st[NODES] = 0


@nb.njit(cache=True, nogil=True)
def search_chunk(alpha, ell, k, mode, bound, cap, root, w, run, nxt, mx, witness, st, budget):
    """Advance the search by about ``budget`` nodes.

    Returns DONE, PAUSED, CAP_REACHED, or NEED_ROOM when the state arrays
    are too short for the next position.
    """
    p = st[P]
    best = st[BEST]
    nodes = st[NODES]
    stop = nodes + budget
    status = DONE
    while p >= root:
        limit = mx[p] + 1
        if limit > alpha - 1:
            limit = alpha - 1
        c = nxt[p]
        if c > limit:
            p -= 1
            if p >= root:
                nxt[p] += 1
            continue
        if p == cap:
            status = CAP_REACHED
            break
        if p >= w.shape[0]:
            status = NEED_ROOM
            break
        if nodes >= stop:
            status = PAUSED
            break
        nodes += 1
        w[p] = c
        _update_run(w, run, p)
        if _tail_forbidden(run, p, ell, k, mode, bound):
            nxt[p] += 1
            continue
        if p + 1 > best:
            best = p + 1
            for i in range(p + 1):
                witness[i] = w[i]
        mx[p + 1] = mx[p] if mx[p] > c else c
        p += 1
        nxt[p] = 0
    st[P] = p
    st[BEST] = best
    st[NODES] = nodes
    return status


@nb.njit(cache=True, nogil=True)
def tail_violation(w, n, ell, k, mode, bound):
    """Direct check (no run table) for a forbidden factor ending at position n-1."""
    for m in range(1, n // ell + 1):
        start = n - ell * m
        periodic = True
        for i in range(start + m, n):
            if w[i] != w[i - m]:
                periodic = False
                break
        if periodic:
            return True
    for m in range(1, n // k + 1):
        s = n - k * m
        sizes = np.ones(k, np.int64)
        pairs = 0
        for i in range(k):
            for j in range(i + 1, k):
                same = True
                for t in range(m):
                    if w[s + i * m + t] != w[s + j * m + t]:
                        same = False
                        break
                if same:
                    pairs += 1
                    sizes[i] += 1
                    sizes[j] += 1
        if mode == MODE_BUDGET:
            if pairs <= bound:
                return True
        elif sizes.max() <= bound:
            return True
    return False


def new_state(size: int):
    w = np.zeros(size, np.int64)
    run = np.zeros((size, size), np.int32)
    nxt = np.zeros(size + 1, np.int64)
    mx = np.full(size + 1, -1, np.int64)
    witness = np.zeros(size, np.int64)
    st = np.zeros(3, np.int64)
    return w, run, nxt, mx, witness, st


def grow_state(state, size: int):
    """Copy ``state`` into arrays able to hold words of length ``size``."""
    bigger = new_state(size)
    for old, new in zip(state, bigger):
        if old.ndim == 2:
            new[:old.shape[0], :old.shape[1]] = old
        else:
            new[:old.shape[0]] = old
    return bigger
