import itertools
from fractions import Fraction

import pytest

from blockpatterns.expectation import (ExpectationQuery, TooLarge, brute_force_expectation, expected_anti_powers,
                                       expected_block_patterns, expected_block_patterns_exact,
                                       expected_k_powers_closed, monte_carlo_expectation, pattern_probability,
                                       report)
from blockpatterns.patterns import BlockSignature, partitions
from conftest import class_sizes, split


def q(n, k, alpha, mu):
    return ExpectationQuery(n, k, alpha, BlockSignature(tuple(mu)))


def test_closed_form_examples():
    assert expected_block_patterns(q(2, 2, 2, (2, 0))) == 0.5
    assert expected_block_patterns(q(6, 2, 2, (2, 0))) == pytest.approx(5.625, rel=1e-12)
    assert expected_block_patterns(q(6, 2, 2, (0, 1))) == pytest.approx(3.375, rel=1e-12)


def test_power_closed_form_examples():
    assert expected_k_powers_closed(6, 2, 2) == pytest.approx(3.375, rel=1e-12)
    assert expected_k_powers_closed(3, 3, 2) == pytest.approx(0.25, rel=1e-12)
    assert expected_k_powers_closed(8, 3, 2) == pytest.approx(1.6875, rel=1e-12)
    with pytest.raises(ValueError):
        expected_k_powers_closed(4, 1, 2)


def test_anti_power_examples():
    assert expected_anti_powers(6, 2, 2) == pytest.approx(5.625, rel=1e-12)
    assert expected_anti_powers(9, 1, 3) == 45
    assert expected_anti_powers(2, 2, 2) == 0.5


def test_oracle_examples():
    assert brute_force_expectation(q(2, 2, 2, (2, 0))) == Fraction(1, 2)
    assert brute_force_expectation(q(4, 2, 2, (0, 1))) == Fraction(7, 4)
    assert brute_force_expectation(q(3, 3, 2, (3, 0, 0))) == 0
    with pytest.raises(TooLarge):
        brute_force_expectation(q(30, 2, 2, (2, 0)))


def _direct_average(n, k, alpha, sizes):
    total = 0
    for w in itertools.product(range(alpha), repeat=n):
        for m in range(1, n // k + 1):
            for s in range(n - k * m + 1):
                total += class_sizes(split(w[s:s + k * m], k)) == sizes
    return Fraction(total, alpha**n)


@pytest.mark.parametrize("n,k,alpha", [(5, 2, 2), (6, 3, 2), (4, 2, 3), (6, 2, 2)])
def test_oracle_matches_direct_average(n, k, alpha):
    for sig in partitions(k):
        sizes = sorted(s for s, x in enumerate(sig.mu, 1) for _ in range(x))
        assert brute_force_expectation(ExpectationQuery(n, k, alpha, sig)) == _direct_average(n, k, alpha, sizes)


def test_closed_form_matches_oracle_everywhere():
    cases = 0
    for alpha in (2, 3):
        for n in range(1, 9):
            for k in range(1, min(4, n) + 1):
                for sig in partitions(k):
                    query = ExpectationQuery(n, k, alpha, sig)
                    assert expected_block_patterns_exact(query) == brute_force_expectation(query)
                    cases += 1
    assert cases == 130


def test_specializations():
    for alpha in (2, 3, 4):
        for k in range(2, 7):
            for n in (k, k + 1, 17, 64, 200):
                power = expected_block_patterns(ExpectationQuery(n, k, alpha, BlockSignature.power(k)))
                assert expected_k_powers_closed(n, k, alpha) == pytest.approx(power, rel=1e-9)
                anti = expected_block_patterns(ExpectationQuery(n, k, alpha, BlockSignature.anti_power(k)))
                assert expected_anti_powers(n, k, alpha) == pytest.approx(anti, rel=1e-9)


@pytest.mark.parametrize("k", range(1, 9))
def test_pattern_probabilities_sum_to_one(k):
    for alpha in (2, 3):
        for m in (1, 2):
            assert sum(pattern_probability(sig, m, alpha) for sig in partitions(k)) == 1


def test_growth_bands():
    anti = [expected_anti_powers(n, 3, 2) / n**2 for n in range(100, 2001, 100)]
    assert 0.1 < min(anti) <= max(anti) < 0.2
    powers = [expected_block_patterns(ExpectationQuery(n, 3, 2, BlockSignature.power(3))) / n
              for n in range(100, 2001, 100)]
    assert 0.2 < min(powers) <= max(powers) < 0.4


def test_monte_carlo_covers_and_is_deterministic():
    query = q(6, 2, 2, (2, 0))
    a = monte_carlo_expectation(query, 20_000, seed=7)
    b = monte_carlo_expectation(query, 20_000, seed=7, threads=3)
    assert a == b
    assert a.covers(5.625)
    assert monte_carlo_expectation(query, 20_000, seed=8) != a
    with pytest.raises(ValueError):
        monte_carlo_expectation(query, 10, seed=1)


def test_report_json():
    rep = report(q(4, 2, 2, (0, 1)), oracle=True, trials=1000, seed=3)
    out = rep.to_json()
    assert out["oracle"] == "7/4"
    assert out["closed_form"] == 1.75
    assert set(out["mc"]) == {"mean", "ci99", "trials", "seed"}
    assert report(q(4, 2, 2, (0, 1))).to_json()["mc"] is None


def test_query_validation():
    with pytest.raises(ValueError):
        q(4, 3, 2, (0, 1))
    with pytest.raises(ValueError):
        q(2, 3, 2, (3, 0, 0))
