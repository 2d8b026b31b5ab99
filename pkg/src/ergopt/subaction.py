"""Subactions, residuals, contact loci, and maximizing orbits.

Two solvers produce subaction fields. The exact route computes a calibrated
subaction for a locally constant potential as longest-walk values from a
critical node in the reduced graph (weights minus alpha); everything is
Fraction arithmetic, so residuals vanish identically where they should. The
float route is the averaged fixed-point iteration v <- (v + Gv)/2 with
base-point renormalization, available for locally constant potentials here
and for grid potentials in the doubling module.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import FLOAT_RESIDUAL_TOL, ITERATION_TOL, MAX_ITERS
from .debruijn import (
    DeBruijnGraph,
    build_debruijn,
    cycle_mean,
    cycle_word,
    enumerate_simple_cycles,
    find_critical_node,
    karp_alpha,
)
from .measures import PeriodicOrbitMeasure, least_rotation, periodic_measure
from .potentials import GridPotential, LocallyConstantPotential
from .words import PointSpec, SymbolWord, format_word

Scalar = Fraction | float


class InvalidSubactionError(ValueError):
    pass


@dataclass(frozen=True)
class SubactionField:
    """Candidate subaction u with its normalization u(base) = 0.

    Either node-indexed (one value per (depth-1)-word, `nodes` set) or
    grid-indexed (one value per grid point, `grid_n` set). `alpha` is the
    maximizing value the field was solved against; iteration diagnostics are
    kept for both solvers (the exact solver reports zero oscillation).
    """

    alpha: Scalar
    values: tuple[Scalar, ...]
    nodes: tuple[SymbolWord, ...] | None = None
    d: int | None = None
    depth: int | None = None
    grid_n: int | None = None
    iterations: int = 0
    oscillation: float = 0.0
    converged: bool = True
    exact: bool = False

    def node_value(self, word: SymbolWord) -> Scalar:
        if self.nodes is None:
            raise TypeError("not a node-indexed field")
        idx = 0
        for s in word:
            idx = idx * self.d + s
        return self.values[idx]

    def value_at_point(self, x: PointSpec) -> Scalar:
        if self.nodes is None:
            raise TypeError("grid fields are indexed by grid position, not PointSpec")
        return self.node_value(x.prefix(self.depth - 1))

    def grid_value(self, i: int) -> float:
        if self.grid_n is None:
            raise TypeError("not a grid-indexed field")
        return self.values[i % self.grid_n]


@dataclass(frozen=True)
class ResidualField:
    """R = u(shifted) - u - A + alpha, per edge (nodes) or per grid point."""

    alpha: Scalar
    values: tuple[Scalar, ...]
    graph: DeBruijnGraph | None = None
    grid_n: int | None = None
    exact: bool = False

    def as_table(self) -> dict[SymbolWord, Scalar]:
        if self.graph is None:
            raise TypeError("grid residuals have no word table")
        return {e.word: r for e, r in zip(self.graph.edges, self.values)}

    def min(self) -> Scalar:
        return min(self.values)


@dataclass(frozen=True)
class SubactionReport:
    is_subaction: bool
    is_calibrated: bool
    worst_violation: float
    worst_calibration_gap: float


@dataclass(frozen=True)
class ContactLocus:
    """Where the residual is within tol of zero."""

    tol: Scalar
    words: tuple[SymbolWord, ...] | None = None
    edge_indices: tuple[int, ...] | None = None
    grid_indices: tuple[int, ...] | None = None


@dataclass(frozen=True)
class OrbitsResult:
    alpha: Fraction
    cycles: tuple[SymbolWord, ...]
    measures: tuple[PeriodicOrbitMeasure, ...]
    truncated: bool
    subaction: SubactionField
    residual: ResidualField


def exact_subaction(
    G: DeBruijnGraph, alpha: Fraction | None = None
) -> SubactionField:
    """Calibrated subaction by exact longest-walk values.

    With reduced weights w - alpha no cycle is positive, so longest walks from
    a critical node are finite and stabilize within n relaxation rounds; the
    resulting u satisfies u(suffix) - u(prefix) - w + alpha >= 0 on every edge
    with equality attained at some incoming edge of every node.
    """
    if alpha is None:
        alpha = karp_alpha(G)
    s = find_critical_node(G, alpha)
    n = G.node_count
    g: list[Fraction | None] = [None] * n
    g[s] = Fraction(0)
    rounds = 0
    for _ in range(n + 1):
        changed = False
        nxt = list(g)
        for e in G.edges:
            base = g[e.src]
            if base is None:
                continue
            cand = base + e.weight - alpha
            if nxt[e.dst] is None or cand > nxt[e.dst]:
                nxt[e.dst] = cand
                changed = True
        g = nxt
        rounds += 1
        if not changed:
            break
    else:
        raise RuntimeError("longest-walk relaxation failed to stabilize")
    if any(v is None for v in g):
        raise RuntimeError("graph is not strongly connected")
    base = g[0]
    values = tuple(v - base for v in g)
    return SubactionField(
        alpha=alpha,
        values=values,
        nodes=G.nodes,
        d=G.d,
        depth=G.depth,
        iterations=rounds,
        oscillation=0.0,
        converged=True,
        exact=True,
    )


def half_iteration(
    A: LocallyConstantPotential | GridPotential,
    tol: float = ITERATION_TOL,
    max_iters: int = MAX_ITERS,
) -> SubactionField:
    """Averaged max-plus iteration v <- (v + Gv)/2, renormalized at the base.

    (Gv)(y) maximizes v(x) + A(x) over the preimages x of y. The per-step
    drift of the base value converges to alpha/2, so the reported alpha is
    twice the final drift. Float arithmetic; for exact fields on locally
    constant potentials use exact_subaction.
    """
    if isinstance(A, GridPotential):
        from .doubling import grid_half_iteration

        return grid_half_iteration(A, tol=tol, max_iters=max_iters)

    G = build_debruijn(A)
    n = G.node_count
    src = np.array([e.src for e in G.edges], dtype=np.int64)
    dst = np.array([e.dst for e in G.edges], dtype=np.int64)
    wgt = np.array([float(e.weight) for e in G.edges], dtype=float)
    v = np.zeros(n)
    drift = 0.0
    osc = float("inf")
    iterations = 0
    for iterations in range(1, max_iters + 1):
        gv = np.full(n, -np.inf)
        np.maximum.at(gv, dst, v[src] + wgt)
        w = 0.5 * (v + gv)
        drift = w[0]
        w -= drift
        osc = float(np.max(np.abs(w - v)))
        v = w
        if osc < tol:
            break
    return SubactionField(
        alpha=2.0 * drift,
        values=tuple(float(x) for x in v),
        nodes=G.nodes,
        d=G.d,
        depth=G.depth,
        iterations=iterations,
        oscillation=osc,
        converged=osc < tol,
        exact=False,
    )


def _auto_tol(u: SubactionField) -> float:
    if u.exact:
        return 0.0
    return FLOAT_RESIDUAL_TOL * (1.0 + abs(float(u.alpha)))


def residual(
    u: SubactionField,
    A: LocallyConstantPotential | GridPotential,
    alpha: Scalar | None = None,
    tol: float | None = None,
) -> ResidualField:
    """Residual field of u against A; rejects genuine subaction violations.

    Any residual below -tol (tol = 0 in the exact lane) raises
    InvalidSubactionError naming the offending word or grid point.
    """
    if alpha is None:
        alpha = u.alpha
    if tol is None:
        tol = _auto_tol(u)
    if isinstance(A, GridPotential):
        if u.grid_n != A.n:
            raise ValueError("grid size mismatch")
        n = A.n
        vals = []
        for j in range(n):
            r = u.values[(2 * j) % n] - u.values[j] - A.values[j] + alpha
            vals.append(r)
            if r < -tol:
                raise InvalidSubactionError(
                    f"residual {r} < 0 at grid point {j}/{n}"
                )
        return ResidualField(alpha=alpha, values=tuple(vals), grid_n=n, exact=False)

    G = build_debruijn(A)
    if u.nodes is None or len(u.nodes) != G.node_count:
        raise ValueError("field does not match the potential's graph")
    exact = u.exact and G.exact and isinstance(alpha, Fraction)
    vals = []
    for e in G.edges:
        w = e.weight if exact else float(e.weight)
        r = u.values[e.dst] - u.values[e.src] - w + alpha
        vals.append(r)
        if r < -tol:
            raise InvalidSubactionError(
                f"residual {r} < 0 on word {format_word(e.word)}"
            )
    return ResidualField(alpha=alpha, values=tuple(vals), graph=G, exact=exact)


def verify_subaction(
    u: SubactionField,
    A: LocallyConstantPotential | GridPotential,
    alpha: Scalar | None = None,
    tol: float | None = None,
) -> SubactionReport:
    """Check the subaction inequality and calibration, without raising.

    Calibration means every state attains the maximum over its preimages:
    the minimum incoming residual of every node (every even grid point in the
    doubling case, the others having no grid preimages) is within tol of 0.
    """
    if alpha is None:
        alpha = u.alpha
    if tol is None:
        tol = max(_auto_tol(u), 0.0)
    if isinstance(A, GridPotential):
        n = A.n
        rs = [
            u.values[(2 * j) % n] - u.values[j] - A.values[j] + alpha
            for j in range(n)
        ]
        worst = -min(min(rs), 0)
        gaps = []
        for y in range(0, n, 2):
            pre = (y // 2, (y + n) // 2)
            gaps.append(min(rs[x] for x in pre))
        worst_gap = max(gaps)
        return SubactionReport(
            is_subaction=worst <= tol,
            is_calibrated=worst_gap <= tol,
            worst_violation=float(worst),
            worst_calibration_gap=float(worst_gap),
        )

    G = build_debruijn(A)
    exact = u.exact and G.exact and isinstance(alpha, Fraction)
    rs = []
    for e in G.edges:
        w = e.weight if exact else float(e.weight)
        rs.append(u.values[e.dst] - u.values[e.src] - w + alpha)
    worst = -min(min(rs), 0)
    incoming: list[list[Scalar]] = [[] for _ in G.nodes]
    for e, r in zip(G.edges, rs):
        incoming[e.dst].append(r)
    worst_gap = max(min(rlist) for rlist in incoming)
    return SubactionReport(
        is_subaction=worst <= tol,
        is_calibrated=worst_gap <= tol,
        worst_violation=float(worst),
        worst_calibration_gap=float(worst_gap),
    )


def contact_locus(R: ResidualField, tol: Scalar | None = None) -> ContactLocus:
    """Points/edges where R <= tol; default tol 0 exact, 1e-6*(1+|alpha|) float."""
    if tol is None:
        tol = 0 if R.exact else 1e-6 * (1.0 + abs(float(R.alpha)))
    if R.grid_n is not None:
        idx = tuple(i for i, r in enumerate(R.values) if r <= tol)
        return ContactLocus(tol=tol, grid_indices=idx)
    edges = tuple(i for i, r in enumerate(R.values) if r <= tol)
    words = tuple(R.graph.edges[i].word for i in edges)
    return ContactLocus(tol=tol, words=words, edge_indices=edges)


def residual_at_point(
    u: SubactionField,
    A: LocallyConstantPotential,
    x: PointSpec,
    alpha: Scalar | None = None,
) -> Scalar:
    """R(x) = u(shift x) - u(x) - A(x) + alpha for a symbolic point."""
    if alpha is None:
        alpha = u.alpha
    return (
        u.value_at_point(x.shifted())
        - u.value_at_point(x)
        - A.value_at(x)
        + alpha
    )


def maximizing_orbits(
    G: DeBruijnGraph,
    alpha: Fraction | None = None,
    cap: int = 10_000,
) -> OrbitsResult:
    """All periodic orbits supported on the zero-residual subgraph.

    Every simple cycle of {R = 0} has mean weight exactly alpha and
    conversely, so these are exactly the maximum-mean cycles. Cycle words are
    reported as least rotations in lexicographic order, each with the uniform
    orbit measure (which integrates A to alpha exactly).
    """
    if alpha is None:
        alpha = karp_alpha(G)
    u = exact_subaction(G, alpha)
    zero_edges = []
    vals = []
    for i, e in enumerate(G.edges):
        r = u.values[e.dst] - u.values[e.src] - e.weight + alpha
        vals.append(r)
        if r == 0:
            zero_edges.append(i)
    R = ResidualField(alpha=alpha, values=tuple(vals), graph=G, exact=True)
    cycles, truncated = enumerate_simple_cycles(G, zero_edges, cap=cap)
    words = []
    for cyc in cycles:
        if cycle_mean(G, cyc) != alpha:
            raise RuntimeError("zero-residual cycle with off-alpha mean")
        words.append(least_rotation(cycle_word(G, cyc)))
    words.sort()
    measures = tuple(periodic_measure(w, G.d) for w in words)
    return OrbitsResult(
        alpha=alpha,
        cycles=tuple(words),
        measures=measures,
        truncated=truncated,
        subaction=u,
        residual=R,
    )
