"""Doubling map x -> 2x mod 1 on a dyadic grid: subactions and orbit scan.

The grid {i/n} with n a power of two is forward-invariant, so residuals need
no interpolation; the two preimages of a grid point fall between grid points
for odd indices and are evaluated at the left grid point, consistent with the
half-open cylinder convention used everywhere else.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

import numpy as np

from .config import ITERATION_TOL, MAX_ITERS, check_budget
from .measures import PeriodicOrbitMeasure, periodic_measure
from .potentials import GridPotential
from .subaction import ResidualField, SubactionField, residual
from .words import SymbolWord


def grid_half_iteration(
    A: GridPotential,
    tol: float = ITERATION_TOL,
    max_iters: int = MAX_ITERS,
) -> SubactionField:
    """Averaged iteration v <- (v + Gv)/2 on the grid, renormalized at 0.

    (Gv)(j/n) maximizes v + A over the two preimages j/(2n) and (j+n)/(2n),
    each read at its left grid point. Alpha is twice the per-step drift of
    the base value.
    """
    n = A.n
    check_budget(n, "grid field")
    idx = np.arange(n)
    lo1 = idx // 2
    lo2 = (idx + n) // 2
    a = np.asarray(A.values, dtype=float)
    a1 = a[lo1]
    a2 = a[lo2]
    v = np.zeros(n)
    drift = 0.0
    osc = float("inf")
    iterations = 0
    for iterations in range(1, max_iters + 1):
        gv = np.maximum(v[lo1] + a1, v[lo2] + a2)
        w = 0.5 * (v + gv)
        drift = float(w[0])
        w -= drift
        osc = float(np.max(np.abs(w - v)))
        v = w
        if osc < tol:
            break
    return SubactionField(
        alpha=2.0 * drift,
        values=tuple(float(x) for x in v),
        grid_n=n,
        iterations=iterations,
        oscillation=osc,
        converged=osc < tol,
        exact=False,
    )


@dataclass(frozen=True)
class DetectedOrbit:
    """A low-period orbit of the doubling map sitting inside {R <= tol}."""

    points: tuple[Fraction, ...]
    word: SymbolWord
    period: int
    measure: PeriodicOrbitMeasure
    max_residual: float


@dataclass(frozen=True)
class DoublingResult:
    subaction: SubactionField
    residual: ResidualField
    alpha: float
    orbits: tuple[DetectedOrbit, ...]
    orbit_tol: float
    scanned_orbits: int


def _rational_orbits(max_period: int):
    """Orbits of the points of period <= max_period: x = p/(2^j - 1)."""
    seen: set[Fraction] = set()
    for j in range(1, max_period + 1):
        q = 2**j - 1
        for p in range(q):
            x = Fraction(p, q)
            if x in seen:
                continue
            orbit = []
            y = x
            while True:
                orbit.append(y)
                seen.add(y)
                y = y * 2
                if y >= 1:
                    y -= 1
                if y == x:
                    break
            yield tuple(orbit)


def doubling_solve(
    A: GridPotential,
    tol: float = ITERATION_TOL,
    max_iters: int = MAX_ITERS,
    orbit_tol: float | None = None,
    max_period: int = 12,
) -> DoublingResult:
    """Solve for a subaction on the grid and scan {R <= tol} for orbits.

    The scan tests every periodic rational p/(2^j - 1), j <= max_period
    (these are exactly the points of period <= max_period, the rationals with
    odd denominator up to 2^max_period - 1), reading the residual at the left
    grid point of each orbit point. An orbit is reported when all its points
    pass. The binary cycle word of the orbit (digit 1 where the point is in
    the right half) gives the exact uniform orbit measure.
    """
    u = grid_half_iteration(A, tol=tol, max_iters=max_iters)
    R = residual(u, A)
    alpha = float(u.alpha)
    if orbit_tol is None:
        orbit_tol = 1e-6 * (1.0 + abs(alpha))
    check_budget(2 ** (max_period + 1), f"orbit scan to period {max_period}")
    n = A.n
    detected = []
    scanned = 0
    for orbit in _rational_orbits(max_period):
        scanned += 1
        worst = max(float(R.values[floor(x * n) % n]) for x in orbit)
        if worst <= orbit_tol:
            word = tuple(0 if x < Fraction(1, 2) else 1 for x in orbit)
            detected.append(
                DetectedOrbit(
                    points=orbit,
                    word=word,
                    period=len(orbit),
                    measure=periodic_measure(word, 2),
                    max_residual=worst,
                )
            )
    detected.sort(key=lambda o: (o.period, o.word))
    return DoublingResult(
        subaction=u,
        residual=R,
        alpha=alpha,
        orbits=tuple(detected),
        orbit_tol=orbit_tol,
        scanned_orbits=scanned,
    )
