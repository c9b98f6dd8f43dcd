from fractions import Fraction

import numpy as np
import pytest

from blockpatterns.generators import (Angle, DegenerateExponent, GrowthViolation, KTooSmall, PrecisionExhausted,
                                      SesquipowerSeed, build, decimal_real, fibonacci_finite, fibonacci_word,
                                      gamma_word, infinite_alphabet_power_free, lower_bound_word, mechanical,
                                      parse_real, recurrent_avoider, recurrent_avoider_seed, sesquipower,
                                      sigma_avoider_word, sturmian_power_bound, thue_morse)
from blockpatterns.patterns import PairBudget, Power, contains
from blockpatterns.words import InfiniteWord, Word


def test_thue_morse_examples(tm_prefix):
    t = thue_morse()
    assert str(t.prefix(8)) == "01101001"
    assert t[1] == 0
    assert str(t.prefix(16)) == "0110100110010110"
    assert t.prefix(500).letters == tm_prefix(500)


def test_fibonacci_examples():
    f = fibonacci_word()
    assert str(f.prefix(8)) == "01001010"
    assert str(fibonacci_finite(3)) == "010"
    assert str(f.prefix(13)) == "0100101001001"


def test_fibonacci_matches_recurrence():
    s = fibonacci_finite(20)
    assert fibonacci_word().prefix(len(s)) == s


def test_fibonacci_preset_matches_mechanical():
    mech = mechanical(Angle.preset("fibonacci"))
    assert mech.prefix(10_000) == fibonacci_word().prefix(10_000)


def test_mechanical_examples():
    assert str(mechanical(Angle(Fraction(1, 2))).prefix(4)) == "0101"
    half = Angle(Fraction(1, 2), Fraction(1, 2))
    assert mechanical(half, "lower")[1] == 0
    assert mechanical(half, "upper")[1] == 1


def test_mechanical_decimal_agrees_with_rational():
    a = Angle(parse_real("0.375"), parse_real("0.1"))
    b = Angle(Fraction(3, 8), Fraction(1, 10))
    assert mechanical(a).prefix(200) == mechanical(b).prefix(200)


@pytest.mark.parametrize("p,q", [(1, 2), (1, 3), (2, 5), (3, 7), (5, 8)])
def test_rational_angle_is_periodic(p, q):
    w = mechanical(Angle(Fraction(p, q), Fraction(1, 5))).prefix(6 * q).letters
    assert all(w[i] == w[i + q] for i in range(len(w) - q))
    assert sum(w[:q]) == p


def test_precision_exhausted_on_endpoint():
    # theta = 0.5 given as a decimal puts every even index exactly on the cut point
    with pytest.raises(PrecisionExhausted):
        mechanical(Angle(decimal_real("0.5"), decimal_real("0"))).prefix(4)


def test_sturmian_power_bound_examples():
    assert sturmian_power_bound(Angle.preset("fibonacci")) == 4
    assert sturmian_power_bound(Angle(Fraction(1, 2))) == 3
    assert sturmian_power_bound(Angle(parse_real("0.9"))) == 11


def test_sesquipower_examples():
    assert str(sesquipower(SesquipowerSeed.from_words(["1"])).prefix(7)) == "1111111"
    assert str(sesquipower(SesquipowerSeed.from_words(["0", "1"])).prefix(7)) == "0101010"


def _expand(words, levels):
    w = words[0]
    for n in range(2, levels + 1):
        w = w + words[min(n, len(words)) - 1] + w
    return w


@pytest.mark.parametrize("seed", [["0", "1"], ["01", "2", "10"], ["a", "bc", "d", "e"]])
def test_sesquipower_recurrence(seed):
    w = _expand(seed, 6)
    x = sesquipower(SesquipowerSeed.from_words(seed))
    assert str(x.prefix(len(w))) == w


def test_sesquipower_factors_recur():
    seed = ["0", "12", "3"]
    x = sesquipower(SesquipowerSeed.from_words(seed))
    for n in range(1, 4):
        short = str(x.prefix(len(_expand(seed, n))))
        longer = str(x.prefix(len(_expand(seed, n + 2))))
        for i in range(len(short)):
            for j in range(i + 1, len(short) + 1):
                u = short[i:j]
                first = longer.find(u)
                assert longer.find(u, first + 1) >= 0


def test_recurrent_avoider_examples():
    assert str(recurrent_avoider(6).prefix(5)) == "01110"
    assert str(recurrent_avoider(7).prefix(6)) == "011110"
    w1 = "01110"
    w2 = w1 + "1" * 15 + w1
    assert len(w2) == 25
    assert str(recurrent_avoider(6).prefix(25)) == w2
    with pytest.raises(KTooSmall):
        recurrent_avoider(5)


@pytest.mark.parametrize("k", [6, 7, 8])
def test_recurrent_avoider_is_a_sesquipower(k):
    n = (k - 1) ** 3 + 17
    assert recurrent_avoider(k).prefix(n) == sesquipower(recurrent_avoider_seed(k)).prefix(n)


def test_gamma_word_examples():
    g = gamma_word(4)
    assert str(g.prefix(6)) == "100010"
    assert g[25] == 1
    assert g[24] == 0
    assert [j for j, a in enumerate(gamma_word(5).prefix(300), 1) if a] == [1, 6, 36, 216]


def test_gamma_growth_violation():
    with pytest.raises(GrowthViolation):
        gamma_word(4, lambda i: 4 ** (i - 1)).prefix(10)
    # growth is only checked as far as the queried range needs
    lazy = gamma_word(4, lambda i: (1, 5, 25, 26)[min(i, 4) - 1])
    assert str(lazy.prefix(24)) == "10001" + "0" * 19
    with pytest.raises(GrowthViolation):
        lazy.prefix(30)


def test_infinite_alphabet_examples():
    y = infinite_alphabet_power_free()
    assert str(y.prefix(6)) == "int:1,1,2,2,2,2"
    assert y[7] == 3 and y[14] == 3 and y[15] == 4


def test_infinite_alphabet_factors_have_bounded_repeats():
    w = np.array(infinite_alphabet_power_free().prefix(1000).letters)
    n = len(w)
    # a single letter a_i repeats exactly 2^i times
    for i in range(1, 10):
        run = int((w == i).sum())
        assert run == min(2**i, max(0, n - (2**i - 2)))
    # a factor with two distinct letters never occurs twice in a row
    for m in range(2, n // 2 + 1):
        eq = np.concatenate(([0], np.cumsum(w[:-m] == w[m:])))
        starts = np.nonzero(eq[m:n - m + 1] - eq[:n - 2 * m + 1] == m)[0]
        assert all(w[s] == w[s + m - 1] for s in starts)


def test_lower_bound_word_examples():
    assert str(lower_bound_word(4)) == "10001000100100100010001"
    assert len(lower_bound_word(5)) == 39
    with pytest.raises(KTooSmall):
        lower_bound_word(3)


def test_sigma_avoider_examples():
    assert str(sigma_avoider_word(4, 1)) == "0001000"
    assert str(sigma_avoider_word(5, 3)) == "000010000"
    with pytest.raises(DegenerateExponent):
        sigma_avoider_word(3, 3)


@pytest.mark.parametrize("k,sigma", [(4, 1), (5, 1), (5, 3), (6, 1)])
def test_sigma_avoider_detector_check(k, sigma):
    w = sigma_avoider_word(k, sigma)
    assert contains(w, Power(k)) is None
    assert contains(w, PairBudget(k, sigma)) is None


def test_build_registry():
    assert isinstance(build("thue-morse", {}), InfiniteWord)
    assert str(build("mechanical", {"preset": "fibonacci"}).prefix(8)) == "01001010"
    assert str(build("mechanical", {"theta": "1/2"}).prefix(4)) == "0101"
    assert str(build("sesquipower", {"seed": "0,1"}).prefix(7)) == "0101010"
    assert str(build("gamma-word", {"k": "4", "gamma-base": "6"}).prefix(7)) == "1000010"
    assert isinstance(build("lower-bound-word", {"k": "4"}), Word)
    with pytest.raises(ValueError):
        build("nope", {})
    with pytest.raises(ValueError):
        build("recurrent-avoider", {})
