"""Plain-Python reference checks shared by the tests.

These deliberately avoid the package's vectorized scanning code so they can
serve as independent oracles for it.
"""

from itertools import product

import pytest


def split(w, k):
    m = len(w) // k
    return [tuple(w[j * m:(j + 1) * m]) for j in range(k)]


def class_sizes(bl):
    sizes = {}
    for b in bl:
        sizes[b] = sizes.get(b, 0) + 1
    return sorted(sizes.values())


def naive_first(w, k, test):
    """First (1-based start, m) whose k blocks satisfy ``test``, scanning (start, m) in order."""
    w = tuple(w)
    n = len(w)
    for s in range(n):
        for m in range(1, (n - s) // k + 1):
            if test(split(w[s:s + k * m], k)):
                return s + 1, m
    return None


def naive_count(w, k, test):
    w = tuple(w)
    n = len(w)
    return sum(1 for m in range(1, n // k + 1) for s in range(n - k * m + 1)
               if test(split(w[s:s + k * m], k)))


def is_power_blocks(bl):
    return len(set(bl)) == 1


def is_anti_blocks(bl):
    return len(set(bl)) == len(bl)


def all_words(alpha, n):
    return product(range(alpha), repeat=n)


@pytest.fixture
def tm_prefix():
    return lambda n: tuple(bin(i).count("1") & 1 for i in range(n))
