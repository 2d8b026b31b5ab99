"""Zero-temperature limits: beta sweeps, rate functions, slope checks.

A sweep runs the equilibrium solver along a beta schedule and reports how the
depth-3 cylinder vectors behave: converged-to-measure when the last three
points pairwise agree within 1e-6, oscillating when they alternate between
two clusters separated by more than 1e-3 (intra-cluster diameter below 1e-4),
inconclusive otherwise.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import check_budget
from .debruijn import build_debruijn, karp_alpha
from .measures import depth_profile, integrate, periodic_measure
from .potentials import LocallyConstantPotential
from .subaction import (
    SubactionField,
    exact_subaction,
    maximizing_orbits,
    residual_at_point,
    verify_subaction,
)
from .transfer import EquilibriumResult, equilibrium
from .words import PointSpec, SymbolWord, all_words

CONVERGED_TOL = 1e-6
CLUSTER_SEP = 1e-3
CLUSTER_DIAM = 1e-4


@dataclass(frozen=True)
class SweepResult:
    schedule: tuple[float, ...]
    results: tuple[EquilibriumResult, ...]
    alpha: Fraction
    energies: tuple[float, ...]
    pressure_gaps: tuple[float, ...]  # P(beta*A) - beta*alpha
    cylinder_depth: int
    cylinder_words: tuple[SymbolWord, ...]
    cylinder_vectors: tuple[tuple[float, ...], ...]
    verdict: str
    limit_vector: tuple[float, ...] | None


def _sup_dist(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _verdict(vectors) -> tuple[str, tuple[float, ...] | None]:
    if len(vectors) >= 3:
        tail = vectors[-3:]
        if all(
            _sup_dist(tail[i], tail[j]) < CONVERGED_TOL
            for i in range(3)
            for j in range(i + 1, 3)
        ):
            return "converged-to-measure", tuple(vectors[-1])
    if len(vectors) >= 6:
        even = vectors[-2::-2][:3]
        odd = vectors[-1::-2][:3]
        diam = max(
            max(_sup_dist(a, b) for a in grp for b in grp) for grp in (even, odd)
        )
        sep = min(_sup_dist(a, b) for a in even for b in odd)
        if diam < CLUSTER_DIAM and sep > CLUSTER_SEP:
            return "oscillating", None
    return "inconclusive", None


def _equilibrium_task(args):
    A, beta = args
    return equilibrium(A, beta)


def beta_sweep(
    A: LocallyConstantPotential,
    schedule,
    depth: int = 3,
    jobs: int = 1,
) -> SweepResult:
    """Equilibria along a beta schedule with ground-state diagnostics.

    Tracks the energy ascent toward alpha, the gap P(beta*A) - beta*alpha,
    and the depth-`depth` cylinder vectors that feed the verdict.
    """
    schedule = tuple(float(b) for b in schedule)
    if not schedule:
        raise ValueError("empty beta schedule")
    check_budget(A.d**depth, f"depth-{depth} cylinder vectors")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = tuple(
                pool.map(_equilibrium_task, [(A, b) for b in schedule])
            )
    else:
        results = tuple(equilibrium(A, b) for b in schedule)
    alpha = karp_alpha(build_debruijn(A))
    words = tuple(tuple(w) for w in all_words(A.d, depth))
    vectors = tuple(
        tuple(float(r.measure.cylinder_mass(w)) for w in words) for r in results
    )
    energies = tuple(r.energy for r in results)
    gaps = tuple(
        r.pressure - r.beta * float(alpha) for r in results
    )
    verdict, limit = _verdict(vectors)
    return SweepResult(
        schedule=schedule,
        results=results,
        alpha=alpha,
        energies=energies,
        pressure_gaps=gaps,
        cylinder_depth=depth,
        cylinder_words=words,
        cylinder_vectors=vectors,
        verdict=verdict,
        limit_vector=limit,
    )


@dataclass(frozen=True)
class RateFunctionResult:
    point: PointSpec
    value: Fraction | float  # Fraction when finite and exact; math.inf otherwise
    partial_sums: tuple
    exact: bool


def ldp_rate(
    x: PointSpec,
    u: SubactionField,
    A: LocallyConstantPotential,
    alpha: Fraction | None = None,
    horizon: int | None = None,
) -> RateFunctionResult:
    """Sum of residuals along the forward orbit of x.

    For an eventually periodic point the tail is decided exactly: the sum
    over one period equals period*(alpha - mean), which is 0 precisely when
    the cycle is maximizing (then every one of its residuals vanishes, u
    being calibrated), and positive otherwise, making the total +inf.
    Requires a calibrated subaction.
    """
    if not A.exact or not u.exact:
        raise ValueError("rate function needs the exact lane (rational A and u)")
    if alpha is None:
        alpha = u.alpha
    report = verify_subaction(u, A, alpha)
    if not (report.is_subaction and report.is_calibrated):
        raise ValueError(
            "rate function needs a calibrated subaction "
            f"(violation {report.worst_violation}, "
            f"calibration gap {report.worst_calibration_gap})"
        )
    pre_len = len(x.preperiod)
    period = len(x.period)
    mean = integrate(periodic_measure(x.period, x.d), A)
    if horizon is None:
        horizon = pre_len + 2 * period
    sums = []
    total = Fraction(0)
    y = x
    for _ in range(horizon):
        total += residual_at_point(u, A, y, alpha)
        sums.append(total)
        y = y.shifted()
    if mean == alpha:
        value = sum(
            (residual_at_point(u, A, x.shifted(n), alpha) for n in range(pre_len)),
            Fraction(0),
        )
        return RateFunctionResult(x, value, tuple(sums), exact=True)
    return RateFunctionResult(x, math.inf, tuple(sums), exact=True)


@dataclass(frozen=True)
class SlopeCheckResult:
    cylinder: SymbolWord
    empirical_slope: float
    predicted_q: float  # -min rate over entries into the cylinder; -inf if none
    gap: float
    best_point: PointSpec | None
    underflow: bool
    verdict: str
    schedule: tuple[float, ...]


def ldp_slope_check(
    A: LocallyConstantPotential,
    cylinder: SymbolWord,
    schedule,
    u: SubactionField | None = None,
    alpha: Fraction | None = None,
    max_preperiod: int | None = None,
) -> SlopeCheckResult:
    """Compare the measured decay slope of log mu_beta(C) with -Q(C).

    The empirical slope is a least-squares fit over the top half of the
    schedule (log masses computed in log-space, so underflow only flags the
    report). Q(C) is searched over points that enter C and then fall onto a
    maximizing cycle, with preperiods up to 3*depth symbols.
    """
    cylinder = tuple(cylinder)
    G = build_debruijn(A)
    if alpha is None:
        alpha = karp_alpha(G)
    if u is None:
        u = exact_subaction(G, alpha)
    if max_preperiod is None:
        max_preperiod = 3 * A.depth
    total_words = sum(A.d**j for j in range(max_preperiod + 1))
    check_budget(total_words, "rate-function preperiod search")

    orbits = maximizing_orbits(G, alpha)
    best: Fraction | None = None
    best_point: PointSpec | None = None
    for cyc in orbits.cycles:
        rotations = {cyc[i:] + cyc[:i] for i in range(len(cyc))}
        for rot in rotations:
            for j in range(max_preperiod + 1):
                for pre in all_words(A.d, j):
                    x = PointSpec(A.d, tuple(pre), rot)
                    if x.prefix(len(cylinder)) != cylinder:
                        continue
                    rate = ldp_rate(x, u, A, alpha)
                    if rate.value == math.inf:
                        continue
                    if best is None or rate.value < best:
                        best = rate.value
                        best_point = x
    predicted_q = -float(best) if best is not None else -math.inf

    schedule = tuple(sorted(float(b) for b in schedule))
    if len(schedule) < 4:
        raise ValueError("slope fit needs at least 4 schedule points")
    sweep = beta_sweep(A, schedule, depth=min(3, max(1, len(cylinder))))
    logmus = [r.log_cylinder_mass(cylinder) for r in sweep.results]
    underflow = any(math.exp(lm) == 0.0 for lm in logmus if lm != -math.inf)
    top = len(schedule) // 2
    xs = np.asarray(schedule[top:])
    ys = np.asarray(logmus[top:])
    slope = float(np.polyfit(xs, ys, 1)[0])
    return SlopeCheckResult(
        cylinder=cylinder,
        empirical_slope=slope,
        predicted_q=predicted_q,
        gap=abs(slope - predicted_q),
        best_point=best_point,
        underflow=underflow,
        verdict=sweep.verdict,
        schedule=schedule,
    )
