"""Finite words and eventually periodic points of the full shift on d symbols.

Symbols are 0..d-1. A finite word is a plain tuple of ints. Eventually
periodic points carry a preperiod and a minimal period and are kept in a
canonical form so that equal points compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm

SymbolWord = tuple[int, ...]


def check_word(word: SymbolWord, d: int) -> None:
    if d < 2:
        raise ValueError(f"alphabet size must be >= 2, got {d}")
    for s in word:
        if not (0 <= s < d):
            raise ValueError(f"symbol {s} out of range for alphabet of size {d}")


def parse_word(text: str, d: int) -> SymbolWord:
    """Digits string -> word, e.g. '011' -> (0, 1, 1). Alphabets up to 10."""
    if d > 10:
        raise ValueError("digit strings only cover alphabets up to 10 symbols")
    try:
        word = tuple(int(c) for c in text)
    except ValueError as exc:
        raise ValueError(f"word {text!r} contains a non-digit") from exc
    check_word(word, d)
    return word


def format_word(word: SymbolWord) -> str:
    return "".join(str(s) for s in word)


def all_words(d: int, k: int):
    """All length-k words in lexicographic order. Caller checks the budget."""
    return product(range(d), repeat=k)


def minimal_period(word: SymbolWord) -> SymbolWord:
    """Shortest word generating `word` by repetition."""
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


@dataclass(frozen=True)
class PointSpec:
    """Eventually periodic point: preperiod then period repeated forever.

    Canonical form: the period is minimal, and the preperiod is as short as
    possible (trailing symbols that merely repeat the periodic tail are rolled
    into a rotation of the period). Two PointSpecs are equal as dataclasses
    exactly when they denote the same point.
    """

    d: int
    preperiod: SymbolWord
    period: SymbolWord

    def __post_init__(self) -> None:
        check_word(self.preperiod, self.d)
        check_word(self.period, self.d)
        if not self.period:
            raise ValueError("period must be nonempty")
        per = minimal_period(tuple(self.period))
        pre = tuple(self.preperiod)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def periodic(cls, period: SymbolWord, d: int) -> "PointSpec":
        return cls(d, (), tuple(period))

    def symbol_at(self, n: int) -> int:
        """0-based n-th symbol."""
        if n < 0:
            raise IndexError(n)
        a = len(self.preperiod)
        if n < a:
            return self.preperiod[n]
        return self.period[(n - a) % len(self.period)]

    def prefix(self, k: int) -> SymbolWord:
        return tuple(self.symbol_at(i) for i in range(k))

    def shifted(self, n: int = 1) -> "PointSpec":
        """The point with the first n symbols dropped."""
        pre, per = self.preperiod, self.period
        for _ in range(n):
            if pre:
                pre = pre[1:]
            else:
                per = per[1:] + per[:1]
        return PointSpec(self.d, pre, per)

    def __str__(self) -> str:
        head = format_word(self.preperiod)
        return f"{head}({format_word(self.period)})^inf"


def word_to_real(w: SymbolWord | PointSpec, d: int | None = None) -> Fraction:
    """Base-d expansion value sum_i w_i d^-(i+1), exact.

    Finite words give the left endpoint of their cylinder interval; eventually
    periodic points get the geometric tail in closed form, e.g. the point with
    period (0, 1) on two symbols maps to 1/3.
    """
    if isinstance(w, PointSpec):
        if d is not None and d != w.d:
            raise ValueError("alphabet mismatch")
        base = w.d
        a = len(w.preperiod)
        p = len(w.period)
        head = sum(
            (Fraction(s, base ** (i + 1)) for i, s in enumerate(w.preperiod)),
            Fraction(0),
        )
        rep = sum(s * base ** (p - 1 - j) for j, s in enumerate(w.period))
        return head + Fraction(rep, base**p - 1) / base**a
    if d is None:
        raise ValueError("finite words need the alphabet size d")
    check_word(w, d)
    return sum((Fraction(s, d ** (i + 1)) for i, s in enumerate(w)), Fraction(0))


def word_interval(w: SymbolWord, d: int) -> tuple[Fraction, Fraction]:
    """Half-open cylinder interval [x, x + d^-k) of a depth-k word."""
    x = word_to_real(w, d)
    return x, x + Fraction(1, d ** len(w))


def shift_metric(x: PointSpec, y: PointSpec) -> Fraction:
    """(1/2)^n with n the first (1-based) position where x and y differ; 0 if equal."""
    if x.d != y.d:
        raise ValueError("points live on different alphabets")
    if x == y:
        return Fraction(0)
    horizon = max(len(x.preperiod), len(y.preperiod)) + lcm(
        len(x.period), len(y.period)
    )
    for i in range(horizon):
        if x.symbol_at(i) != y.symbol_at(i):
            return Fraction(1, 2 ** (i + 1))
    # Equal on a full preperiod + lcm window means equal everywhere; the
    # canonical-form equality above should already have caught it.
    return Fraction(0)
