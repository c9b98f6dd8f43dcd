"""Named infinite words and explicit finite constructions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .words import InfiniteWord, Word, as_word


class GeneratorError(ValueError):
    pass


class KTooSmall(GeneratorError):
    pass


class GrowthViolation(GeneratorError):
    pass


class PrecisionExhausted(GeneratorError):
    pass


class DegenerateExponent(GeneratorError):
    pass


# ---------------------------------------------------------------- reals


@dataclass(frozen=True, eq=False)
class FixedReal:
    """A real number available as ``floor(v * 2**bits)`` for any ``bits``.

    ``scaled(bits)`` may be off by less than one unit in the last place.
    """

    scaled: Callable[[int], int]
    label: str
    value: Fraction | None = None  # exact value when the input was a finite decimal

    def __float__(self) -> float:
        return self.scaled(64) / 2.0**64

    def __str__(self) -> str:
        return self.label


def _golden_conjugate_scaled(bits: int) -> int:
    # floor(2**bits * (3 - sqrt 5) / 2)
    r = math.isqrt(5 << (2 * bits))
    return ((3 << bits) - r) // 2


def decimal_real(text: str) -> FixedReal:
    try:
        d = Fraction(Decimal(text))
    except InvalidOperation:
        raise GeneratorError(f"not a decimal number: {text!r}") from None
    return FixedReal(lambda bits: math.floor(d * (1 << bits)), text, d)


GOLDEN_CONJUGATE = FixedReal(_golden_conjugate_scaled, "2-phi")

Real = Fraction | FixedReal


def parse_real(text: str) -> Real:
    """``p/q`` and integers are exact; decimals become fixed-point approximations."""
    text = text.strip()
    if "/" in text or text.lstrip("+-").isdigit():
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise GeneratorError(f"bad rational {text!r}") from None
    return decimal_real(text)


@dataclass(frozen=True)
class Angle:
    theta: Real
    x0: Real = Fraction(0)
    prec: int = 128

    PRESETS = ("fibonacci",)

    def __post_init__(self):
        if self.prec < 64:
            raise GeneratorError("angle precision must be at least 64 bits")
        if isinstance(self.theta, Fraction) and self.theta % 1 == 0:
            raise GeneratorError("theta must not be an integer")

    @classmethod
    def preset(cls, name: str, prec: int = 128) -> "Angle":
        if name == "fibonacci":
            return cls(GOLDEN_CONJUGATE, GOLDEN_CONJUGATE, prec)
        raise GeneratorError(f"unknown angle preset {name!r}")

    @property
    def exact(self) -> bool:
        return isinstance(self.theta, Fraction) and isinstance(self.x0, Fraction)

    def __str__(self) -> str:
        return f"theta={self.theta}, x={self.x0}"


def _scaled(v: Real, bits: int) -> int:
    if isinstance(v, Fraction):
        return math.floor(v * (1 << bits))
    return v.scaled(bits)


def _mechanical_rule(angle: Angle, upper: bool) -> Callable[[int], int]:
    if angle.exact:
        theta, x0 = angle.theta % 1, angle.x0 % 1
        den = math.lcm(theta.denominator, x0.denominator)
        t = theta.numerator * (den // theta.denominator)
        x = x0.numerator * (den // x0.denominator)

        def exact_letter(n: int) -> int:
            r = ((n - 1) * t + x) % den
            return int(r >= den - t) if upper else int(r > den - t)

        return exact_letter

    prec = angle.prec

    @lru_cache(maxsize=None)
    def at_bits(bits: int) -> tuple[int, int]:
        total = 1 << bits
        return _scaled(angle.theta, bits) % total, _scaled(angle.x0, bits) % total

    def fixed_letter(n: int) -> int:
        margin = n + 2
        bits = prec + margin.bit_length()
        total = 1 << bits
        t, x = at_bits(bits)
        if t <= margin or total - t <= margin:
            raise PrecisionExhausted(f"theta too close to 0 mod 1 at {bits} bits")
        r = ((n - 1) * t + x) % total
        cut = total - t
        if abs(r - cut) <= margin or min(r, total - r) <= margin:
            raise PrecisionExhausted(
                f"index {n}: rotation point within {margin} ulps of an interval endpoint")
        return int(r >= cut)

    return fixed_letter


def mechanical(angle: Angle, variant: str = "upper") -> InfiniteWord:
    """Upper (``[1-theta, 1)`` gives 1) or lower (``(1-theta, 1)``) mechanical word."""
    if variant not in ("upper", "lower"):
        raise GeneratorError(f"variant must be 'upper' or 'lower', got {variant!r}")
    rule = _mechanical_rule(angle, variant == "upper")
    return InfiniteWord(rule, 2, f"{variant} mechanical word, {angle}")


def sturmian_power_bound(angle: Angle) -> int:
    """Order ``M = ceil(1 / min(theta, 1 - theta)) + 1`` of powers the word avoids."""
    exact = angle.theta if isinstance(angle.theta, Fraction) else angle.theta.value
    if exact is not None:
        theta = exact % 1
        return math.ceil(1 / min(theta, 1 - theta)) + 1
    bits = angle.prec
    total = 1 << bits
    t = _scaled(angle.theta, bits) % total
    lo = min(t, total - t)
    if lo <= 2:
        raise PrecisionExhausted("theta too close to an integer")
    hi_ceil = -(-total // (lo - 2))
    lo_ceil = -(-total // (lo + 2))
    if hi_ceil != lo_ceil:
        raise PrecisionExhausted("1/min(theta, 1-theta) too close to an integer")
    return lo_ceil + 1


# ---------------------------------------------------------------- words


def thue_morse() -> InfiniteWord:
    def letter(n: int) -> int:
        return bin(n - 1).count("1") & 1

    return InfiniteWord(letter, 2, "Thue-Morse word")


def fibonacci_finite(n: int) -> Word:
    """``S_1 = 0``, ``S_2 = 01``, ``S_n = S_{n-1} S_{n-2}``."""
    if n < 1:
        raise GeneratorError("index starts at 1")
    a, b = (0,), (0, 1)
    if n == 1:
        return Word(a, 2)
    for _ in range(n - 2):
        a, b = b, b + a
    return Word(b, 2)


def fibonacci_word() -> InfiniteWord:
    def letter(n: int) -> int:
        lengths = [1, 2]
        while lengths[-1] < n:
            lengths.append(lengths[-1] + lengths[-2])
        j = len(lengths) - 1
        # S_j = S_{j-1} S_{j-2}; descend until S_1 or S_2
        while j > 1:
            if n <= lengths[j - 1]:
                j -= 1
            else:
                n -= lengths[j - 1]
                j -= 2
        return (0, 1)[n - 1] if j == 1 else 0

    return InfiniteWord(letter, 2, "Fibonacci word")


@dataclass(frozen=True)
class SesquipowerSeed:
    """The word sequence v_1, v_2, ... given lazily by length and letter rules."""

    length: Callable[[int], int]
    letter: Callable[[int, int], int]
    alphabet_size: int | None = None

    @classmethod
    def from_words(cls, words: Sequence[Word | str], alphabet_size: int | None = None) -> "SesquipowerSeed":
        """Explicit v_1, v_2, ...; the last word repeats forever."""
        ws = [as_word(w) for w in words]
        if not ws:
            raise GeneratorError("seed needs at least one word")
        if alphabet_size is None:
            alphabet_size = max((max(w.letters, default=0) for w in ws), default=0) + 1

        def pick(n: int) -> Word:
            return ws[min(n, len(ws)) - 1]

        return cls(lambda n: len(pick(n)), lambda n, i: pick(n).letters[i - 1], alphabet_size)


def sesquipower(seed: SesquipowerSeed) -> InfiniteWord:
    """Limit of ``w_1 = v_1``, ``w_{n+1} = w_n v_{n+1} w_n``."""
    if seed.length(1) < 1:
        raise GeneratorError("v_1 must be nonempty")

    def letter(i: int) -> int:
        lengths = [0, seed.length(1)]  # lengths[n] = |w_n|
        while lengths[-1] < i:
            n = len(lengths) - 1
            lengths.append(2 * lengths[n] + seed.length(n + 1))
        n = len(lengths) - 1
        while n > 1:
            half = lengths[n - 1]
            mid = seed.length(n)
            if i <= half:
                pass
            elif i <= half + mid:
                return seed.letter(n, i - half)
            else:
                i -= half + mid
            n -= 1
        return seed.letter(1, i)

    return InfiniteWord(letter, seed.alphabet_size, "sesquipower")


def recurrent_avoider(k: int) -> InfiniteWord:
    """Limit of ``w_0 = 0``, ``w_{n+1} = w_n 1^{(k-3)|w_n|} w_n``; ``|w_n| = (k-1)^n``."""
    if k < 6:
        raise KTooSmall(f"recurrent avoider needs k >= 6, got {k}")

    def letter(i: int) -> int:
        size = 1
        while size < i:
            size *= k - 1
        while size > 1:
            half = size // (k - 1)
            if i <= half:
                pass
            elif i <= (k - 2) * half:
                return 1
            else:
                i -= (k - 2) * half
            size = half
        return 0

    return InfiniteWord(letter, 2, f"recurrent (k,k-5)-anti-power avoider, k={k}")


def recurrent_avoider_seed(k: int) -> SesquipowerSeed:
    """The sesquipower seed reproducing ``recurrent_avoider(k)``."""
    return SesquipowerSeed(
        lambda n: 1 if n == 1 else (k - 3) * (k - 1) ** (n - 2),
        lambda n, i: 0 if n == 1 else 1,
        2,
    )


def gamma_word(k: int, gamma: Callable[[int], int] | None = None) -> InfiniteWord:
    """1 exactly at positions gamma_1 < gamma_2 < ...; growth gamma_{i+1} >= (k+1) gamma_i."""
    if k < 4:
        raise KTooSmall(f"gamma word needs k >= 4, got {k}")
    if gamma is None:
        def gamma(i: int) -> int:
            return (k + 1) ** (i - 1)

    def ones_upto(n: int) -> list[int]:
        g = gamma(1)
        if g < 1:
            raise GrowthViolation(f"gamma_1 = {g} is not a position")
        out, i = [], 1
        while g <= n:
            out.append(g)
            nxt = gamma(i + 1)
            if nxt < (k + 1) * g:
                raise GrowthViolation(f"gamma_{i + 1} = {nxt} < {k + 1} * gamma_{i} = {(k + 1) * g}")
            g, i = nxt, i + 1
        return out

    def letter(j: int) -> int:
        ones = ones_upto(j)
        return int(bool(ones) and ones[-1] == j)

    def prefix(n: int) -> list[int]:
        x = [0] * n
        for g in ones_upto(n):
            x[g - 1] = 1
        return x

    return InfiniteWord(letter, 2, f"gamma word, k={k}", prefix)


def infinite_alphabet_power_free() -> InfiniteWord:
    """``a_1^2 a_2^4 a_3^8 ...`` with ``a_i`` encoded as the integer ``i``."""
    # a_i occupies positions 2^i - 1 .. 2^{i+1} - 2
    return InfiniteWord(lambda n: (n + 1).bit_length() - 1, None, "prod a_i^(2^i)")


def lower_bound_word(k: int) -> Word:
    """``1(0^{k-1}1)^{k-2} 0^{k-2} 1 0^{k-2} (10^{k-1})^{k-2} 1``, length ``2k^2 - 2k - 1``."""
    if k < 4:
        raise KTooSmall(f"lower bound word needs k >= 4, got {k}")
    text = ("1" + ("0" * (k - 1) + "1") * (k - 2) + "0" * (k - 2) + "1"
            + "0" * (k - 2) + ("1" + "0" * (k - 1)) * (k - 2) + "1")
    return Word.parse(text, 2)


def sigma_classes_floor(sigma: int) -> int:
    """``floor((sqrt(8 sigma + 1) + 1) / 2)`` in exact integer arithmetic."""
    return (math.isqrt(8 * sigma + 1) + 1) // 2


def sigma_avoider_word(k: int, sigma: int) -> Word:
    """``0^{k-1} (1 0^{k-1})^e`` with ``e = k - floor((sqrt(8 sigma+1)+1)/2) - 1``."""
    if k < 2 or sigma < 1:
        raise GeneratorError("need k >= 2 and sigma >= 1")
    e = k - sigma_classes_floor(sigma) - 1
    if e < 0:
        raise DegenerateExponent(f"exponent {e} is negative for k={k}, sigma={sigma}")
    return Word.parse("0" * (k - 1) + ("1" + "0" * (k - 1)) * e, 2)


# ---------------------------------------------------------------- registry


GENERATOR_NAMES = ("thue-morse", "fibonacci", "mechanical", "sesquipower", "recurrent-avoider",
                   "gamma-word", "inf-alphabet", "lower-bound-word", "sigma-avoider")
FINITE_GENERATORS = ("lower-bound-word", "sigma-avoider")


def build(name: str, params: dict[str, str]) -> InfiniteWord | Word:
    """Construct a generator by its CLI name from string parameters."""

    def need(key: str) -> str:
        if key not in params:
            raise GeneratorError(f"generator {name!r} needs parameter {key!r}")
        return params[key]

    def angle() -> Angle:
        prec = int(params.get("prec", 128))
        if "preset" in params:
            return Angle.preset(params["preset"], prec)
        return Angle(parse_real(need("theta")), parse_real(params.get("x0", "0")), prec)

    if name == "thue-morse":
        return thue_morse()
    if name == "fibonacci":
        return fibonacci_word()
    if name == "mechanical":
        return mechanical(angle(), params.get("variant", "upper"))
    if name == "sesquipower":
        return sesquipower(SesquipowerSeed.from_words(need("seed").split(",")))
    if name == "recurrent-avoider":
        return recurrent_avoider(int(need("k")))
    if name == "gamma-word":
        k = int(need("k"))
        if "gamma-base" in params:
            base = int(params["gamma-base"])
            return gamma_word(k, lambda i: base ** (i - 1))
        return gamma_word(k)
    if name == "inf-alphabet":
        return infinite_alphabet_power_free()
    if name == "lower-bound-word":
        return lower_bound_word(int(need("k")))
    if name == "sigma-avoider":
        return sigma_avoider_word(int(need("k")), int(need("sigma")))
    raise GeneratorError(f"unknown generator {name!r}; choose from {', '.join(GENERATOR_NAMES)}")
