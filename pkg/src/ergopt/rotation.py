"""Rotation vectors, rotation sets, and constrained maximization.

Everything here runs over occupation measures: nonnegative edge weights on
the cylinder graph summing to 1 and balanced at every node. Those are exactly
the depth-k marginals of invariant measures, extreme points being uniform
measures on simple cycles, so linear programs over them answer questions
about invariant measures exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .config import check_budget
from .debruijn import DeBruijnGraph, build_debruijn
from .measures import InvariantMeasure, PeriodicOrbitMeasure, integrate, periodic_measure
from .potentials import LocallyConstantPotential
from .simplex import FarkasCertificate, InfeasibleError, LPSolution, solve_lp
from .words import SymbolWord

DEFAULT_BAND = Fraction(1, 10**9)


class InfeasibleRotationError(ValueError):
    """The requested rotation vector lies outside the rotation set."""

    def __init__(self, message: str, certificate: FarkasCertificate):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True)
class RotationSpec:
    """An observable with values in Q^n, one locally constant map per axis.

    Coordinates are refined to a common depth on construction so that every
    edge of the cylinder graph carries a definite value of each.
    """

    coords: tuple[LocallyConstantPotential, ...]

    def __post_init__(self):
        coords = tuple(self.coords)
        if not coords:
            raise ValueError("need at least one coordinate")
        d = coords[0].d
        if any(c.d != d for c in coords):
            raise ValueError("coordinates disagree on alphabet size")
        depth = max(c.depth for c in coords)
        object.__setattr__(
            self, "coords", tuple(c.refined(depth) for c in coords)
        )

    @property
    def d(self) -> int:
        return self.coords[0].d

    @property
    def depth(self) -> int:
        return self.coords[0].depth

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def edge_values(self, G: DeBruijnGraph) -> list[tuple[Fraction, ...]]:
        cols = [
            [Fraction(c.coefficient(e.word)) for e in G.edges] for c in self.coords
        ]
        return [tuple(col[i] for col in cols) for i in range(len(G.edges))]


@dataclass(frozen=True)
class OccupationMeasure:
    """Edge weights of a balanced unit flow on the cylinder graph."""

    graph: DeBruijnGraph
    weights: tuple[Fraction, ...]
    objective: Fraction | None

    def edge_integral(self, A: LocallyConstantPotential) -> Fraction:
        A = A.refined(self.graph.depth)
        return sum(
            (w * Fraction(A.coefficient(e.word)) for w, e in zip(self.weights, self.graph.edges)),
            Fraction(0),
        )

    def rotation_vector(self, phi: RotationSpec) -> tuple[Fraction, ...]:
        return tuple(self.edge_integral(c) for c in phi.coords)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.weights) if w != 0)


def _base_rows(G: DeBruijnGraph) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Mass-one plus node balance rows (one of which is always redundant)."""
    ne = len(G.edges)
    rows = [[Fraction(1)] * ne]
    rhs = [Fraction(1)]
    for v in range(G.node_count):
        row = [Fraction(0)] * ne
        for i, e in enumerate(G.edges):
            if e.dst == v:
                row[i] += 1
            if e.src == v:
                row[i] -= 1
        rows.append(row)
        rhs.append(Fraction(0))
    return rows, rhs


def _occupation_lp(
    G: DeBruijnGraph,
    objective: list[Fraction],
    extra_eq: tuple[tuple[list[Fraction], Fraction], ...] = (),
    extra_ub: tuple[tuple[list[Fraction], Fraction], ...] = (),
) -> tuple[OccupationMeasure, LPSolution]:
    rows, rhs = _base_rows(G)
    for row, b in extra_eq:
        rows.append(row)
        rhs.append(b)
    A_ub = [row for row, _ in extra_ub] or None
    b_ub = [b for _, b in extra_ub] or None
    sol = solve_lp(objective, A_eq=rows, b_eq=rhs, A_ub=A_ub, b_ub=b_ub)
    return OccupationMeasure(G, sol.x, sol.objective), sol


def rotation_vector(mu: InvariantMeasure, phi: RotationSpec):
    """Coordinate-wise integrals of the observable."""
    return tuple(integrate(mu, c) for c in phi.coords)


@dataclass(frozen=True)
class RotationSetResult:
    dimension: int
    vertices: tuple[tuple[Fraction, ...], ...]
    complete: bool  # True when the vertex list is provably the full hull
    interval: tuple[Fraction, Fraction] | None  # dimension 1 only


def _support_oracle(phi: RotationSpec):
    G = build_debruijn(phi.coords[0])
    vals = phi.edge_values(G)

    def objective(direction) -> list[Fraction]:
        return [
            sum((Fraction(c) * v[i] for i, c in enumerate(direction)), Fraction(0))
            for v in vals
        ]

    def support(direction) -> tuple[Fraction, ...]:
        occ, _ = _occupation_lp(G, objective(direction))
        return occ.rotation_vector(phi)

    def support_vertex(direction) -> tuple[Fraction, ...]:
        # a second solve along the rotated direction pins down an endpoint
        # of the optimal face, so the result is extreme in the projection
        obj = objective(direction)
        _, sol = _occupation_lp(G, obj)
        perp = (-Fraction(direction[1]), Fraction(direction[0]))
        occ, _ = _occupation_lp(
            G, objective(perp), extra_eq=((obj, sol.objective),)
        )
        return occ.rotation_vector(phi)

    return support, support_vertex


def _refine_hull(support, verts: list[tuple[Fraction, Fraction]]):
    """Insert vertices until every chord is certified as a hull edge."""
    i = 0
    while i < len(verts):
        p = verts[i]
        q = verts[(i + 1) % len(verts)]
        if p == q:
            verts.pop((i + 1) % len(verts))
            continue
        normal = (q[1] - p[1], p[0] - q[0])  # outward for ccw order
        v = support(normal)
        if normal[0] * v[0] + normal[1] * v[1] > normal[0] * p[0] + normal[1] * p[1]:
            verts.insert(i + 1, v)
            continue
        i += 1
    return verts


def rotation_set(phi: RotationSpec) -> RotationSetResult:
    """The set of rotation vectors of invariant measures.

    Dimension 1 gives the exact interval, dimension 2 the exact vertex list
    in counterclockwise order (support-function refinement terminates because
    strict improvement is decidable in rational arithmetic). In dimension 3 a
    fixed fan of 26 directions is probed and higher dimensions get the 2n
    axis directions plus sign patterns, so those vertex lists may be partial
    and are flagged incomplete.
    """
    n = phi.dimension
    support, support_vertex = _support_oracle(phi)
    if n == 1:
        hi = support((Fraction(1),))[0]
        lo = support((Fraction(-1),))[0]
        verts = ((lo,), (hi,)) if lo != hi else ((lo,),)
        return RotationSetResult(1, verts, True, (lo, hi))
    if n == 2:
        seed = [
            support_vertex((Fraction(1), Fraction(0))),
            support_vertex((Fraction(0), Fraction(1))),
            support_vertex((Fraction(-1), Fraction(0))),
            support_vertex((Fraction(0), Fraction(-1))),
        ]
        verts: list[tuple[Fraction, Fraction]] = []
        for p in seed:
            if p not in verts:
                verts.append(p)
        if len(verts) > 1:
            verts = _refine_hull(support_vertex, verts)
        return RotationSetResult(2, tuple(verts), True, None)
    if n == 3:
        dirs = [
            (a, b, c)
            for a in (-1, 0, 1)
            for b in (-1, 0, 1)
            for c in (-1, 0, 1)
            if (a, b, c) != (0, 0, 0)
        ]
    else:
        dirs = []
        for i in range(n):
            for s in (1, -1):
                dirs.append(tuple(s if j == i else 0 for j in range(n)))
        if 2**n <= 64:
            from itertools import product

            dirs.extend(p for p in product((1, -1), repeat=n))
    pts: list[tuple[Fraction, ...]] = []
    for c in dirs:
        v = support(c)
        if v not in pts:
            pts.append(v)
    return RotationSetResult(n, tuple(pts), False, None)


@dataclass(frozen=True)
class BetaResult:
    value: Fraction
    target: tuple[Fraction, ...]
    band: Fraction  # 0 when the target was matched by equality rows
    measure: OccupationMeasure


def beta_function(
    A: LocallyConstantPotential,
    phi: RotationSpec,
    h,
    band: Fraction | float | None = None,
) -> BetaResult:
    """Maximal integral of A over measures with rotation vector h.

    Rational targets are matched by exact equality rows. A float anywhere in
    h switches to a band of two-sided inequalities, default half-width 1e-9,
    carried exactly as rationals; pass band=0 to force equalities on the
    exact binary values of the floats. Raises InfeasibleRotationError, with
    the Farkas certificate attached, when h is outside the rotation set.
    """
    if A.d != phi.d:
        raise ValueError("potential and observable disagree on alphabet size")
    h = (h,) if isinstance(h, (int, float, Fraction)) else tuple(h)
    if len(h) != phi.dimension:
        raise ValueError(f"target has {len(h)} coordinates, expected {phi.dimension}")
    if band is None:
        band = Fraction(0) if all(isinstance(v, (int, Fraction)) for v in h) else DEFAULT_BAND
    band = Fraction(band)
    if band < 0:
        raise ValueError("band must be nonnegative")
    target = tuple(Fraction(v) for v in h)

    depth = max(A.depth, phi.depth)
    A = A.refined(depth)
    phi = RotationSpec(tuple(c.refined(depth) for c in phi.coords))
    G = build_debruijn(A)
    vals = phi.edge_values(G)
    obj = [Fraction(e.weight) for e in G.edges]

    extra_eq = []
    extra_ub = []
    for i in range(phi.dimension):
        row = [v[i] for v in vals]
        if band == 0:
            extra_eq.append((row, target[i]))
        else:
            extra_ub.append((row, target[i] + band))
            extra_ub.append(([-x for x in row], band - target[i]))
    try:
        occ, sol = _occupation_lp(G, obj, tuple(extra_eq), tuple(extra_ub))
    except InfeasibleError as e:
        raise InfeasibleRotationError(
            f"rotation vector {target} is unattainable (band {band})",
            e.certificate,
        ) from e
    return BetaResult(value=sol.objective, target=target, band=band, measure=occ)


@dataclass(frozen=True)
class OracleResult:
    target: tuple[Fraction, ...]
    found: bool
    best_word: SymbolWord | None
    best_mean: Fraction | None
    matches: int
    max_period: int
    on_boundary: bool | None  # None when not decided for this dimension


def _lyndon_words(d: int, maxlen: int):
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < maxlen:
            w.append(w[len(w) - m])
        while w and w[-1] == d - 1:
            w.pop()


def _boundary_flag(phi: RotationSpec, r: tuple[Fraction, ...]) -> bool | None:
    if phi.dimension == 1:
        rs = rotation_set(phi)
        lo, hi = rs.interval
        if not (lo <= r[0] <= hi):
            return None
        return r[0] == lo or r[0] == hi
    if phi.dimension == 2:
        rs = rotation_set(phi)
        verts = rs.vertices
        if len(verts) == 1:
            return r == verts[0] or None
        if len(verts) == 2:
            p, q = verts
            cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
            if cross != 0:
                return None
            t_num = (r[0] - p[0]) * (q[0] - p[0]) + (r[1] - p[1]) * (q[1] - p[1])
            t_den = (q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2
            return 0 <= t_num <= t_den or None
        on_edge = False
        for i, p in enumerate(verts):
            q = verts[(i + 1) % len(verts)]
            cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
            if cross < 0:
                return None  # outside
            if cross == 0:
                on_edge = True
        return on_edge
    return None


def periodic_oracle(
    A: LocallyConstantPotential,
    phi: RotationSpec,
    r,
    max_period: int,
) -> OracleResult:
    """Best periodic orbit whose rotation vector equals r exactly.

    Scans one representative per primitive necklace up to the period cap;
    repetitions of shorter cycles add nothing. Matching is exact, so float
    targets are compared through their binary values.
    """
    if A.d != phi.d:
        raise ValueError("potential and observable disagree on alphabet size")
    if isinstance(r, (int, float, Fraction)):
        r = (r,)
    r = tuple(Fraction(v) for v in r)
    if len(r) != phi.dimension:
        raise ValueError(f"target has {len(r)} coordinates, expected {phi.dimension}")
    check_budget(A.d**max_period, "necklace enumeration")
    best_mean: Fraction | None = None
    best_word: SymbolWord | None = None
    matches = 0
    for w in _lyndon_words(A.d, max_period):
        mu = periodic_measure(w, A.d)
        if rotation_vector(mu, phi) != r:
            continue
        matches += 1
        mean = integrate(mu, A)
        if best_mean is None or mean > best_mean:
            best_mean = mean
            best_word = w
    return OracleResult(
        target=r,
        found=matches > 0,
        best_word=best_word,
        best_mean=best_mean,
        matches=matches,
        max_period=max_period,
        on_boundary=_boundary_flag(phi, r),
    )


def flow_decomposition(
    occ: OccupationMeasure,
) -> tuple[tuple[PeriodicOrbitMeasure, Fraction], ...]:
    """Write an occupation measure as a convex mix of periodic orbits.

    Peels simple cycles from the positive-weight subgraph; node balance
    guarantees every positive edge lies on one. Each peel zeroes at least one
    edge, so at most |E| orbits come back, with exactly matching weights.
    """
    G = occ.graph
    w = list(occ.weights)
    if any(x < 0 for x in w):
        raise ValueError("negative edge weight")
    out = G.out_edges()
    parts: dict[SymbolWord, Fraction] = {}
    remaining = sum(w, Fraction(0))
    while remaining > 0:
        start = next(i for i, x in enumerate(w) if x > 0)
        # walk forward on positive edges until a node repeats
        path = [start]
        seen = {G.edges[start].src: -1, G.edges[start].dst: 0}
        while True:
            cur = G.edges[path[-1]].dst
            nxt = next(i for i in out[cur] if w[i] > 0)
            node = G.edges[nxt].dst
            path.append(nxt)
            if node in seen:
                cycle = path[seen[node] + 1 :]
                break
            seen[node] = len(path) - 1
        amount = min(w[i] for i in cycle)
        for i in cycle:
            w[i] -= amount
        word = tuple(G.edges[i].word[0] for i in cycle)
        mu = periodic_measure(word, G.d)
        parts[mu.cycle] = parts.get(mu.cycle, Fraction(0)) + amount * len(cycle)
        remaining -= amount * len(cycle)
    return tuple(
        (periodic_measure(word, G.d), weight) for word, weight in sorted(parts.items())
    )
