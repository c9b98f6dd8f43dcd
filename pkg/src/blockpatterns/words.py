"""Finite and infinite words over integer alphabets.

Letters are non-negative integers. Positions at the public API are 1-based,
so ``factor(w, i, j)`` is the factor ``w[i..j]`` in the usual notation.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

CHARS = string.digits + string.ascii_lowercase + string.ascii_uppercase
_CHAR_CODE = {c: i for i, c in enumerate(CHARS)}

INT_PREFIX = "int:"


class WordError(ValueError):
    pass


class IndexOutOfRange(WordError):
    pass


class NotDivisible(WordError):
    pass


class EmptyInput(WordError):
    pass


class NotABorder(WordError):
    pass


@dataclass(frozen=True)
class Word:
    """An immutable word. ``alphabet_size=None`` means the unbounded alphabet.

    Text form uses one character per letter (``0-9a-zA-Z``) when the declared
    alphabet has at most 62 letters, and ``int:`` plus comma-separated codes
    otherwise. Equality compares letters only.
    """

    letters: tuple[int, ...]
    alphabet_size: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, "letters", tuple(self.letters))
        if self.alphabet_size is not None and self.alphabet_size < 1:
            raise WordError(f"alphabet size must be positive, got {self.alphabet_size}")
        for a in self.letters:
            if a < 0:
                raise WordError(f"negative letter {a}")
            if self.alphabet_size is not None and a >= self.alphabet_size:
                raise WordError(f"letter {a} outside alphabet of size {self.alphabet_size}")

    @classmethod
    def parse(cls, text: str, alphabet_size: int | None = None) -> "Word":
        text = text.strip()
        if text.startswith(INT_PREFIX):
            body = text[len(INT_PREFIX):].strip()
            letters = tuple(int(t) for t in body.split(",")) if body else ()
            return cls(letters, alphabet_size)
        try:
            letters = tuple(_CHAR_CODE[c] for c in text)
        except KeyError as exc:
            raise WordError(f"unmapped character {exc.args[0]!r} in {text!r}") from None
        return cls(letters, len(CHARS) if alphabet_size is None else alphabet_size)

    def __str__(self) -> str:
        if self.alphabet_size is not None and self.alphabet_size <= len(CHARS):
            return "".join(CHARS[a] for a in self.letters)
        return INT_PREFIX + ",".join(map(str, self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, i):
        # plain 0-based tuple semantics; use ``at`` for 1-based access
        if isinstance(i, slice):
            return Word(self.letters[i], self.alphabet_size)
        return self.letters[i]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + tuple(other.letters), _join_alphabets(self, other))

    def __mul__(self, times: int) -> "Word":
        return Word(self.letters * times, self.alphabet_size)

    def at(self, i: int) -> int:
        if not 1 <= i <= len(self.letters):
            raise IndexOutOfRange(f"position {i} outside 1..{len(self.letters)}")
        return self.letters[i - 1]


def _join_alphabets(u: Word, v: Word) -> int | None:
    if u.alphabet_size is None or v.alphabet_size is None:
        return None
    return max(u.alphabet_size, v.alphabet_size)


def as_word(w: Word | str | Sequence[int], alphabet_size: int | None = None) -> Word:
    """Coerce text or an integer sequence into a ``Word``."""
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return Word.parse(w, alphabet_size)
    return Word(tuple(int(a) for a in w), alphabet_size)


def read_words(lines: Iterable[str], alphabet_size: int | None = None) -> list[Word]:
    """Parse the line-oriented word file format (``#`` starts a comment line)."""
    out = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(Word.parse(line, alphabet_size))
    return out


def factor(w: Word | str, i: int, j: int) -> Word:
    w = as_word(w)
    if not 1 <= i <= j <= len(w):
        raise IndexOutOfRange(f"factor bounds ({i}, {j}) invalid for length {len(w)}")
    return Word(w.letters[i - 1:j], w.alphabet_size)


def blocks(w: Word | str, k: int) -> list[Word]:
    w = as_word(w)
    if k < 1:
        raise WordError("k must be positive")
    if len(w) == 0:
        raise EmptyInput("cannot split the empty word into blocks")
    if len(w) % k:
        raise NotDivisible(f"length {len(w)} not divisible by {k}")
    m = len(w) // k
    return [Word(w.letters[j * m:(j + 1) * m], w.alphabet_size) for j in range(k)]


def failure_function(letters: Sequence[int]) -> list[int]:
    """``f[i]`` is the length of the longest proper border of ``letters[:i+1]``."""
    f = [0] * len(letters)
    b = 0
    for i in range(1, len(letters)):
        while b and letters[i] != letters[b]:
            b = f[b - 1]
        if letters[i] == letters[b]:
            b += 1
        f[i] = b
    return f


def longest_proper_border(w: Word | str) -> Word:
    w = as_word(w)
    if len(w) == 0:
        raise EmptyInput("the empty word has no proper border")
    b = failure_function(w.letters)[-1]
    return Word(w.letters[:b], w.alphabet_size)


def is_border(w: Word, v: Word) -> bool:
    n, b = len(w), len(v)
    return b < n and w.letters[:b] == v.letters and w.letters[n - b:] == v.letters


def power_from_border(w: Word | str, v: Word | str, ell: int) -> Word | None:
    """Return ``u`` with ``w = u v`` when ``|w| >= ell |u|``; ``u^ell`` is then a prefix of ``w``.

    The conclusion is re-checked by expansion before returning.
    """
    w, v = as_word(w), as_word(v)
    if not is_border(w, v):
        raise NotABorder(f"{v} is not a proper border of {w}")
    u = Word(w.letters[:len(w) - len(v)], w.alphabet_size)
    if len(w) < ell * len(u):
        return None
    if (u.letters * ell) != w.letters[:ell * len(u)]:
        raise AssertionError("border expansion failed")  # pragma: no cover
    return u


@dataclass(frozen=True)
class InfiniteWord:
    """A 1-indexed rule ``letter_at(n)`` describing an infinite word.

    ``prefix_fn`` is an optional fast path returning the first ``n`` letters;
    it must agree with ``letter_at``.
    """

    letter_at: Callable[[int], int]
    alphabet_size: int | None
    description: str = ""
    prefix_fn: Callable[[int], Sequence[int]] | None = field(default=None, compare=False)

    def __getitem__(self, n: int) -> int:
        if n < 1:
            raise IndexOutOfRange(f"infinite words are indexed from 1, got {n}")
        return self.letter_at(n)

    def prefix(self, n: int) -> Word:
        if n < 0:
            raise IndexOutOfRange("negative prefix length")
        if self.prefix_fn is not None:
            letters = tuple(int(a) for a in self.prefix_fn(n))
        else:
            letters = tuple(self.letter_at(i) for i in range(1, n + 1))
        return Word(letters, self.alphabet_size)

    def __str__(self) -> str:
        return self.description or "<infinite word>"


def constant_word(a: int = 0, alphabet_size: int | None = None) -> InfiniteWord:
    size = alphabet_size if alphabet_size is not None else a + 1
    return InfiniteWord(lambda n: a, size, f"constant {a}", lambda n: (a,) * n)


def periodic_word(w: Word, description: str = "") -> InfiniteWord:
    """Periodic extension ``w^omega`` of a nonempty finite word."""
    if len(w) == 0:
        raise EmptyInput("cannot extend the empty word periodically")
    letters = w.letters
    return InfiniteWord(lambda n: letters[(n - 1) % len(letters)], w.alphabet_size,
                        description or f"({w})^omega")
