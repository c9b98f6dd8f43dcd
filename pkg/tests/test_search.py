import itertools
import random

import numpy as np
import pytest

from blockpatterns import _kernel
from blockpatterns.patterns import contains
from blockpatterns.search import (AvoidanceSpec, Inconclusive, PreconditionViolated, avoids, bound_check,
                                  canonical_form, exhaustive_threshold, extendable_left, max_avoiding_length,
                                  n_alpha, no_extension_condition)
from blockpatterns.words import Word


@pytest.mark.parametrize("alpha,k,expected", [(2, 2, 2), (2, 3, 9), (2, 4, 24), (4, 3, 9)])
def test_thresholds(alpha, k, expected):
    res = max_avoiding_length(AvoidanceSpec(alpha, k, k))
    assert res.threshold == expected
    assert not res.truncated
    assert len(res.witness) == expected - 1
    assert contains(res.witness, AvoidanceSpec(alpha, k, k).power) is None


def test_n_alpha_and_inconclusive():
    assert n_alpha(3, 3, 2) == 9
    with pytest.raises(Inconclusive):
        n_alpha(4, 4, 2, length_cap=10)


def test_truncated_result_is_a_lower_bound():
    res = max_avoiding_length(AvoidanceSpec(2, 4, 4), length_cap=10)
    assert res.truncated and res.threshold == 11


def test_threads_do_not_change_the_result():
    spec = AvoidanceSpec(3, 3, 3)
    a = max_avoiding_length(spec, threads=1)
    b = max_avoiding_length(spec, threads=4, split_depth=3)
    assert (a.threshold, a.witness, a.nodes_explored) == (b.threshold, b.witness, b.nodes_explored)


def test_witness_is_least_canonical_longest():
    spec = AvoidanceSpec(2, 3, 3)
    res = max_avoiding_length(spec)
    longest = [t for t in itertools.product(range(2), repeat=8)
               if t[0] == 0 and avoids(Word(t, 2), spec)]
    assert res.witness.letters == min(longest)


SMALL_SPECS = [
    AvoidanceSpec(2, 2, 2), AvoidanceSpec(2, 3, 3), AvoidanceSpec(2, 2, 3), AvoidanceSpec(2, 3, 2),
    AvoidanceSpec(2, 4, 3), AvoidanceSpec(2, 3, 4, lam=2), AvoidanceSpec(2, 3, 3, sigma=1),
    AvoidanceSpec(2, 4, 4, sigma=2), AvoidanceSpec(3, 2, 3), AvoidanceSpec(3, 3, 3, lam=2),
]


@pytest.mark.parametrize("spec", SMALL_SPECS, ids=str)
def test_pruned_search_matches_plain_enumeration(spec):
    res = max_avoiding_length(spec, threads=1)
    assert not res.truncated
    if res.threshold <= 12:
        assert exhaustive_threshold(spec, 12) == res.threshold


def test_canonical_form_keeps_avoidance():
    rng = random.Random(11)
    spec = AvoidanceSpec(4, 3, 3)
    seen = 0
    while seen < 200:
        w = Word(tuple(rng.randrange(4) for _ in range(rng.randint(1, 8))), 4)
        c = canonical_form(w)
        assert c.letters[0] == 0
        assert all(c.letters[i] <= max(c.letters[:i], default=-1) + 1 for i in range(len(c)))
        assert avoids(w, spec) == avoids(c, spec)
        seen += avoids(w, spec)


@pytest.mark.parametrize("spec", SMALL_SPECS[:8], ids=str)
def test_suffix_check_matches_full_scan(spec):
    rng = random.Random(str(spec))
    for _ in range(300):
        n = rng.randint(1, 14)
        w = tuple(rng.randrange(spec.alpha) for _ in range(n))
        arr = np.array(w, dtype=np.int64)
        full = not avoids(Word(w, spec.alpha), spec)
        prefix_bad = not avoids(Word(w[:-1], spec.alpha), spec)
        tail = _kernel.tail_violation(arr, n, spec.ell, spec.k, spec.mode, spec.bound)
        assert full == (prefix_bad or tail)


def test_threshold_monotone_in_alpha():
    values = [n_alpha(3, 3, a) for a in (2, 3, 4)]
    assert values == sorted(values)


def test_bound_check_examples():
    assert bound_check(4, 24)
    assert bound_check(5, 55)
    assert not bound_check(4, 23)


def test_no_extension_condition_examples():
    assert no_extension_condition(3, 4, 9)
    assert no_extension_condition(4, 11, 24)
    assert not no_extension_condition(4, 2, 24)
    # boundary is strict: alpha == N/k - k + 3
    assert not no_extension_condition(3, 3, 9)


def test_extendable_left_examples():
    spec = AvoidanceSpec(2, 3, 3)
    ext = extendable_left("00", spec)
    assert ext.allowed == {1, 2}
    assert ext.excluded == {0: ("power-prefix",)}
    assert ext.fresh == 2
    assert extendable_left("", spec).allowed == {0, 1, 2}
    with pytest.raises(PreconditionViolated):
        extendable_left("000", spec)


def test_maximal_witness_has_no_binary_left_extension():
    spec = AvoidanceSpec(2, 3, 3)
    witness = max_avoiding_length(spec).witness
    assert len(witness) == 8
    assert not (extendable_left(witness, spec).allowed & {0, 1})


def test_default_cap_matches_upper_bounds():
    for k in range(2, 7):
        assert AvoidanceSpec(2, k, k).default_cap() == (k**3 - k**2 + k) * (k * (k - 1) // 2)
    assert AvoidanceSpec(2, 4, 4, sigma=2).default_cap() == 3 * (64 - 16 + 4)


def test_spec_validation():
    with pytest.raises(ValueError):
        AvoidanceSpec(2, 1, 3)
    with pytest.raises(ValueError):
        AvoidanceSpec(2, 3, 3, lam=4)
    assert AvoidanceSpec(2, 3, 3, sigma=0).lam is None


def test_result_json():
    out = max_avoiding_length(AvoidanceSpec(2, 3, 3)).to_json()
    assert set(out) == {"threshold", "witness", "nodes", "truncated", "elapsed_ms"}
    assert out["threshold"] == 9 and out["truncated"] is False
