"""Shift-invariant measures with computable cylinder masses.

Three kinds: uniform mass on a periodic orbit, stationary Markov chains whose
states are words of a fixed length, and Bernoulli products. Cylinder masses
are exact whenever the defining data is rational (int/Fraction entries).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .config import check_budget
from .words import PointSpec, SymbolWord, check_word, format_word, minimal_period

Scalar = Fraction | float


def _is_exact(*values) -> bool:
    return all(isinstance(v, Rational) for v in values)


def least_rotation(word: SymbolWord) -> SymbolWord:
    return min(word[i:] + word[:i] for i in range(len(word)))


class InvariantMeasure:
    """Common surface: cylinder_mass, exactness flag, alphabet size."""

    d: int

    def cylinder_mass(self, word: SymbolWord) -> Scalar:
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class PeriodicOrbitMeasure(InvariantMeasure):
    """Uniform mass 1/k on the orbit of the periodic point with cycle word c.

    The cycle is normalized to its minimal generator (with a warning when the
    input was a nontrivial repetition) and stored as its least rotation, so
    measures of the same orbit compare equal.
    """

    d: int
    cycle: SymbolWord

    def __post_init__(self) -> None:
        check_word(self.cycle, self.d)
        if not self.cycle:
            raise ValueError("cycle must be nonempty")
        cyc = minimal_period(tuple(self.cycle))
        if len(cyc) != len(self.cycle):
            warnings.warn(
                f"cycle {format_word(self.cycle)} is a repetition of "
                f"{format_word(cyc)}; normalizing to the minimal cycle",
                stacklevel=2,
            )
        object.__setattr__(self, "cycle", least_rotation(cyc))

    @property
    def period(self) -> int:
        return len(self.cycle)

    def points(self) -> list[PointSpec]:
        k = len(self.cycle)
        return [
            PointSpec.periodic(self.cycle[i:] + self.cycle[:i], self.d)
            for i in range(k)
        ]

    def window(self, i: int, m: int) -> SymbolWord:
        """m symbols of the orbit point starting at cyclic position i."""
        k = len(self.cycle)
        return tuple(self.cycle[(i + j) % k] for j in range(m))

    def cylinder_mass(self, word: SymbolWord) -> Fraction:
        check_word(word, self.d)
        k = len(self.cycle)
        hits = sum(1 for i in range(k) if self.window(i, len(word)) == word)
        return Fraction(hits, k)

    @property
    def exact(self) -> bool:
        return True


@dataclass(frozen=True)
class BernoulliMeasure(InvariantMeasure):
    d: int
    weights: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        if len(self.weights) != self.d:
            raise ValueError("need one weight per symbol")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        total = sum(self.weights)
        if self.exact:
            if total != 1:
                raise ValueError(f"weights sum to {total}, expected 1")
        elif abs(total - 1) > 1e-9:
            raise ValueError(f"weights sum to {total}, expected 1")

    def cylinder_mass(self, word: SymbolWord) -> Scalar:
        check_word(word, self.d)
        mass: Scalar = Fraction(1) if self.exact else 1.0
        for s in word:
            mass *= self.weights[s]
        return mass

    @property
    def exact(self) -> bool:
        return _is_exact(*self.weights)


def _state_index(word: SymbolWord, d: int) -> int:
    idx = 0
    for s in word:
        idx = idx * d + s
    return idx


@dataclass(frozen=True)
class MarkovMeasure(InvariantMeasure):
    """Stationary Markov chain whose states are the d**order words of length
    `order`, listed lexicographically.

    transition[i][j] is the probability of moving from state i to state j;
    for order >= 2 it must vanish unless the states overlap (the source's
    suffix equals the target's prefix), which is what makes the cylinder-mass
    product formula below meaningful on the shift.
    """

    d: int
    order: int
    transition: tuple[tuple[Scalar, ...], ...]
    stationary: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        n = self.d**self.order
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if len(self.transition) != n or any(len(row) != n for row in self.transition):
            raise ValueError(f"transition must be {n}x{n}")
        if len(self.stationary) != n:
            raise ValueError(f"stationary must have {n} entries")
        atol = 0 if self.exact else 1e-9
        for i, row in enumerate(self.transition):
            if any(p < 0 for p in row):
                raise ValueError("transition entries must be nonnegative")
            if abs(sum(row) - 1) > atol:
                raise ValueError(f"row {i} sums to {sum(row)}, expected 1")
        if any(p < 0 for p in self.stationary):
            raise ValueError("stationary entries must be nonnegative")
        if abs(sum(self.stationary) - 1) > atol:
            raise ValueError("stationary vector must sum to 1")
        if self.order >= 2:
            states = self.states()
            for i, v in enumerate(states):
                for j, w in enumerate(states):
                    if self.transition[i][j] != 0 and v[1:] != w[:-1]:
                        raise ValueError(
                            f"transition {format_word(v)}->{format_word(w)} is "
                            f"positive but the states do not overlap"
                        )
        defect = max(
            abs(sum(self.stationary[i] * self.transition[i][j] for i in range(n))
                - self.stationary[j])
            for j in range(n)
        )
        if defect > atol:
            raise ValueError(f"stationary vector is not stationary (defect {defect})")

    def states(self) -> list[SymbolWord]:
        from itertools import product

        return [tuple(w) for w in product(range(self.d), repeat=self.order)]

    def cylinder_mass(self, word: SymbolWord) -> Scalar:
        check_word(word, self.d)
        r = self.order
        m = len(word)
        if m == 0:
            return Fraction(1) if self.exact else 1.0
        if m < r:
            total: Scalar = Fraction(0) if self.exact else 0.0
            for i, state in enumerate(self.states()):
                if state[:m] == word:
                    total += self.stationary[i]
            return total
        mass: Scalar = self.stationary[_state_index(word[:r], self.d)]
        for t in range(m - r):
            if mass == 0:
                break
            i = _state_index(word[t : t + r], self.d)
            j = _state_index(word[t + 1 : t + 1 + r], self.d)
            mass *= self.transition[i][j]
        return mass

    @property
    def exact(self) -> bool:
        return _is_exact(*self.stationary) and all(
            _is_exact(*row) for row in self.transition
        )


def periodic_measure(cycle: SymbolWord, d: int) -> PeriodicOrbitMeasure:
    """Uniform measure on the periodic orbit generated by `cycle`."""
    return PeriodicOrbitMeasure(d, tuple(cycle))


def integrate(mu: InvariantMeasure, potential) -> Scalar:
    """Expectation of a locally constant potential: sum of coef * cylinder mass."""
    if potential.d != mu.d:
        raise ValueError("alphabet mismatch between measure and potential")
    total: Scalar = Fraction(0)
    for word, coef in potential.terms.items():
        mass = mu.cylinder_mass(word)
        if mass:
            total += coef * mass
    return total


@dataclass(frozen=True)
class EntropyValue:
    value: float
    method: str
    depth: int | None = None


def entropy_closed_form(mu: InvariantMeasure) -> EntropyValue:
    """Kolmogorov-Sinai entropy from the defining data, in nats."""
    if isinstance(mu, PeriodicOrbitMeasure):
        return EntropyValue(0.0, "closed_form")
    if isinstance(mu, BernoulliMeasure):
        h = -sum(float(p) * math.log(float(p)) for p in mu.weights if p > 0)
        return EntropyValue(max(0.0, h), "closed_form")
    if isinstance(mu, MarkovMeasure):
        h = 0.0
        for i, pi in enumerate(mu.stationary):
            if pi == 0:
                continue
            row_h = -sum(
                float(p) * math.log(float(p)) for p in mu.transition[i] if p > 0
            )
            h += float(pi) * row_h
        return EntropyValue(max(0.0, h), "closed_form")
    raise TypeError(f"no closed form for {type(mu).__name__}")


def positive_cylinders(mu: InvariantMeasure, m: int):
    """Depth-m words of positive mass, in lexicographic order, with masses."""
    check_budget(mu.d**m, f"depth-{m} cylinder table")

    def rec(prefix: SymbolWord):
        if len(prefix) == m:
            yield prefix, mu.cylinder_mass(prefix)
            return
        for s in range(mu.d):
            ext = prefix + (s,)
            if mu.cylinder_mass(ext) != 0:
                yield from rec(ext)

    yield from rec(())


def depth_profile(mu: InvariantMeasure, m: int) -> list[Scalar]:
    """Masses of all d**m depth-m cylinders in lexicographic order."""
    from .words import all_words

    check_budget(mu.d**m, f"depth-{m} cylinder table")
    return [mu.cylinder_mass(tuple(w)) for w in all_words(mu.d, m)]


def entropy_truncated(mu: InvariantMeasure, m: int) -> EntropyValue:
    """-(1/m) sum over depth-m cylinders of mass*log(mass)."""
    if m < 1:
        raise ValueError("depth must be >= 1")
    h = 0.0
    for _, mass in positive_cylinders(mu, m):
        p = float(mass)
        if p > 0:
            h -= p * math.log(p)
    return EntropyValue(max(0.0, h / m), "truncated", depth=m)
