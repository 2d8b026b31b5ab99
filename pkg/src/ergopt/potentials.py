"""Potentials: locally constant functions on the full shift, and sampled
functions on a dyadic grid of the circle (for the doubling map)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .config import check_budget
from .words import PointSpec, SymbolWord, all_words, check_word, format_word

Scalar = Fraction | float


@dataclass(frozen=True)
class LocallyConstantPotential:
    """A(x) depends on the first `depth` symbols of x.

    `terms` maps depth-k words to coefficients; absent words mean 0. The
    constructor accepts shorter words and refines them: a term on a length-j
    word (j < k) adds its coefficient to every depth-k extension. Coefficients
    may be Fraction/int (exact lane) or float.
    """

    d: int
    depth: int
    terms: dict[SymbolWord, Scalar] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        check_budget(self.d**self.depth, f"depth-{self.depth} coefficient table")
        dense: dict[SymbolWord, Scalar] = {}
        for word, coef in self.terms.items():
            word = tuple(word)
            check_word(word, self.d)
            if len(word) > self.depth:
                raise ValueError(
                    f"term word {format_word(word)} is deeper than depth {self.depth}"
                )
            if len(word) == self.depth:
                dense[word] = dense.get(word, 0) + coef
            else:
                for tail in all_words(self.d, self.depth - len(word)):
                    full = word + tail
                    dense[full] = dense.get(full, 0) + coef
        cleaned = {w: c for w, c in sorted(dense.items()) if c != 0}
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def indicator(cls, word: SymbolWord | str, d: int) -> "LocallyConstantPotential":
        from .words import parse_word

        if isinstance(word, str):
            word = parse_word(word, d)
        return cls(d, len(word), {tuple(word): Fraction(1)})

    @classmethod
    def constant(cls, c: Scalar, d: int) -> "LocallyConstantPotential":
        return cls(d, 1, {(s,): c for s in range(d)})

    @classmethod
    def zero(cls, d: int) -> "LocallyConstantPotential":
        return cls(d, 1, {})

    def coefficient(self, word: SymbolWord) -> Scalar:
        """Value on the cylinder of a depth-k word (prefix rule for longer words)."""
        if len(word) < self.depth:
            raise ValueError("word shorter than the potential depth")
        return self.terms.get(tuple(word[: self.depth]), 0)

    def value_at(self, x: PointSpec) -> Scalar:
        return self.coefficient(x.prefix(self.depth))

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Rational) for c in self.terms.values())

    def refined(self, depth: int) -> "LocallyConstantPotential":
        """Same function, declared at a greater depth."""
        if depth < self.depth:
            raise ValueError("cannot coarsen a potential")
        if depth == self.depth:
            return self
        return LocallyConstantPotential(self.d, depth, dict(self.terms))

    def shifted(self, c: Scalar) -> "LocallyConstantPotential":
        """A + c, as a potential of the same depth."""
        terms: dict[SymbolWord, Scalar] = {
            tuple(w): c for w in all_words(self.d, self.depth)
        }
        for w, coef in self.terms.items():
            terms[w] = terms[w] + coef
        return LocallyConstantPotential(self.d, self.depth, terms)

    def __add__(self, other: "LocallyConstantPotential") -> "LocallyConstantPotential":
        if not isinstance(other, LocallyConstantPotential):
            return NotImplemented
        if other.d != self.d:
            raise ValueError("alphabet mismatch")
        depth = max(self.depth, other.depth)
        a, b = self.refined(depth), other.refined(depth)
        terms = dict(a.terms)
        for w, coef in b.terms.items():
            terms[w] = terms.get(w, 0) + coef
        return LocallyConstantPotential(self.d, depth, terms)

    def __rmul__(self, t: Scalar) -> "LocallyConstantPotential":
        return LocallyConstantPotential(
            self.d, self.depth, {w: t * c for w, c in self.terms.items()}
        )


def _binary_word(i: int, m: int, k: int) -> SymbolWord:
    """First k binary digits of i / 2**m."""
    return tuple((i >> (m - 1 - j)) & 1 for j in range(k))


@dataclass(frozen=True)
class GridPotential:
    """Samples value[i] = A(i/n) on the uniform n-point grid of [0, 1).

    n must be a power of two (>= 4) so the grid is forward-invariant under
    x -> 2x mod 1. Evaluation between grid points uses the left grid point,
    matching the half-open cylinder convention.
    """

    n: int
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.n < 4 or self.n & (self.n - 1):
            raise ValueError(f"grid size must be a power of two >= 4, got {self.n}")
        if len(self.values) != self.n:
            raise ValueError(f"need {self.n} samples, got {len(self.values)}")
        vals = tuple(float(v) for v in self.values)
        if any(not math.isfinite(v) for v in vals):
            raise ValueError("grid samples must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, f, n: int) -> "GridPotential":
        return cls(n, tuple(f(i / n) for i in range(n)))

    @classmethod
    def builtin(cls, name: str, n: int) -> "GridPotential":
        try:
            f = BUILTIN_GRID_FUNCTIONS[name]
        except KeyError:
            raise ValueError(
                f"unknown builtin {name!r}; have {sorted(BUILTIN_GRID_FUNCTIONS)}"
            ) from None
        return cls.from_function(f, n)

    @classmethod
    def from_locally_constant(
        cls, A: LocallyConstantPotential, n: int
    ) -> "GridPotential":
        """Embed a binary-alphabet potential via the base-2 expansion."""
        if A.d != 2:
            raise ValueError("grid embedding needs a binary alphabet")
        m = n.bit_length() - 1
        if n != 2**m or m < A.depth:
            raise ValueError(f"grid size {n} cannot resolve depth {A.depth}")
        values = tuple(
            float(A.terms.get(_binary_word(i, m, A.depth), 0)) for i in range(n)
        )
        return cls(n, values)

    def value_at(self, x: float | Fraction) -> float:
        i = math.floor(x * self.n) % self.n
        return self.values[i]


def _sin2(x: float) -> float:
    s = math.sin(2 * math.pi * x)
    return s * s


def _pwlinear(x: float) -> float:
    return -min(abs(x - 1 / 3), abs(x - 2 / 3))


BUILTIN_GRID_FUNCTIONS = {
    "sin2": _sin2,
    "pwlinear": _pwlinear,
}
