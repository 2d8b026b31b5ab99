"""De Bruijn graph of depth-k words, exact maximum cycle mean, cycles.

Nodes are the (k-1)-words (a single empty-word node when k = 1), one edge per
k-word from its prefix to its suffix, weighted by the potential. All weights
are stored as exact Fractions (floats are converted exactly), so Karp's
algorithm and everything downstream of it is exact arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .config import check_budget
from .potentials import LocallyConstantPotential
from .words import SymbolWord, all_words


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    word: SymbolWord
    weight: Fraction


@dataclass(frozen=True)
class DeBruijnGraph:
    d: int
    depth: int
    nodes: tuple[SymbolWord, ...]
    edges: tuple[Edge, ...]
    exact: bool

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def node_index(self, word: SymbolWord) -> int:
        idx = 0
        for s in word:
            idx = idx * self.d + s
        return idx

    def in_edges(self) -> list[list[int]]:
        table: list[list[int]] = [[] for _ in self.nodes]
        for i, e in enumerate(self.edges):
            table[e.dst].append(i)
        return table

    def out_edges(self) -> list[list[int]]:
        table: list[list[int]] = [[] for _ in self.nodes]
        for i, e in enumerate(self.edges):
            table[e.src].append(i)
        return table


def build_debruijn(A: LocallyConstantPotential) -> DeBruijnGraph:
    """Graph whose closed walks are the periodic orbits, weighted by A."""
    k = A.depth
    check_budget(A.d**k, f"de Bruijn graph with {A.d}**{k} edges")
    nodes = tuple(tuple(w) for w in all_words(A.d, k - 1))
    index = {w: i for i, w in enumerate(nodes)}
    edges = []
    for w in all_words(A.d, k):
        w = tuple(w)
        coef = A.terms.get(w, 0)
        weight = coef if isinstance(coef, Rational) else Fraction(coef)
        edges.append(Edge(index[w[: k - 1]], index[w[1:]], w, Fraction(weight)))
    return DeBruijnGraph(A.d, k, nodes, tuple(edges), A.exact)


def karp_alpha(G: DeBruijnGraph) -> Fraction:
    """Maximum mean cycle weight, exact (Karp's dynamic program)."""
    alpha, _, _ = _karp(G)
    return alpha


def _karp(G: DeBruijnGraph) -> tuple[Fraction, list[int], list[int]]:
    """Karp's recurrence; also returns the length-n walk behind the optimum
    (node sequence of length n+1, edge index sequence of length n) for
    critical-cycle extraction."""
    n = G.node_count
    F: list[list[Fraction | None]] = [[None] * n for _ in range(n + 1)]
    parent: list[list[int]] = [[-1] * n for _ in range(n + 1)]
    F[0][0] = Fraction(0)
    for t in range(1, n + 1):
        prev, cur, par = F[t - 1], F[t], parent[t]
        for i, e in enumerate(G.edges):
            base = prev[e.src]
            if base is None:
                continue
            cand = base + e.weight
            if cur[e.dst] is None or cand > cur[e.dst]:
                cur[e.dst] = cand
                par[e.dst] = i
    best: Fraction | None = None
    best_v = -1
    for v in range(n):
        top = F[n][v]
        if top is None:
            continue
        inner: Fraction | None = None
        for t in range(n):
            if F[t][v] is None:
                continue
            ratio = (top - F[t][v]) / (n - t)
            if inner is None or ratio < inner:
                inner = ratio
        if inner is not None and (best is None or inner > best):
            best = inner
            best_v = v
    if best is None:
        raise RuntimeError("graph has no cycle reachable from the source")
    walk = [best_v]
    walk_edges: list[int] = []
    v = best_v
    for t in range(n, 0, -1):
        ei = parent[t][v]
        walk_edges.append(ei)
        v = G.edges[ei].src
        walk.append(v)
    walk.reverse()
    walk_edges.reverse()
    return best, walk, walk_edges


def _walk_cycles(walk: list[int]):
    """Cycles contained in a node walk, as (start position, end position)."""
    seen: dict[int, int] = {}
    for pos, v in enumerate(walk):
        if v in seen:
            yield seen[v], pos
        seen[v] = pos


def find_critical_node(G: DeBruijnGraph, alpha: Fraction) -> int:
    """A node lying on some cycle of mean weight exactly alpha.

    First tries the cycles inside Karp's optimal walk; if none of them has
    mean alpha (the walk is only guaranteed to contain one under the usual
    argument, so this is belt and braces) falls back to testing nodes by an
    exact best-self-return Bellman pass.
    """
    _, walk, walk_edges = _karp(G)

    for a, b in _walk_cycles(walk):
        total = sum(
            (G.edges[walk_edges[p]].weight for p in range(a, b)), Fraction(0)
        )
        if total == alpha * (b - a):
            return walk[a]

    n, m = G.node_count, len(G.edges)
    check_budget(n * n * m, "critical-node fallback scan")
    for s in range(n):
        if _best_self_return(G, s, alpha) == 0:
            return s
    raise RuntimeError("no critical node found; graph data is inconsistent")


def _best_self_return(G: DeBruijnGraph, s: int, alpha: Fraction) -> Fraction | None:
    """Max reduced weight (w - alpha per edge) over closed walks at s, <= n steps."""
    n = G.node_count
    g: list[Fraction | None] = [None] * n
    g[s] = Fraction(0)
    best: Fraction | None = None
    for _ in range(n):
        nxt: list[Fraction | None] = [None] * n
        for e in G.edges:
            base = g[e.src]
            if base is None:
                continue
            cand = base + e.weight - alpha
            if nxt[e.dst] is None or cand > nxt[e.dst]:
                nxt[e.dst] = cand
        g = nxt
        if g[s] is not None and (best is None or g[s] > best):
            best = g[s]
    return best


def enumerate_simple_cycles(
    G: DeBruijnGraph,
    edge_subset: list[int] | None = None,
    cap: int | None = None,
) -> tuple[list[list[int]], bool]:
    """Simple cycles (no repeated node) as edge-index lists.

    Enumerates each cycle once, rooted at its smallest node index. Returns
    (cycles, truncated); truncated is set when `cap` stopped the enumeration.
    """
    allowed = range(len(G.edges)) if edge_subset is None else edge_subset
    out: list[list[int]] = [[] for _ in G.nodes]
    for i in allowed:
        out[G.edges[i].src].append(i)

    cycles: list[list[int]] = []
    truncated = False

    def dfs(start: int, v: int, path: list[int], visited: set[int]) -> bool:
        for i in out[v]:
            dst = G.edges[i].dst
            if dst == start:
                cycles.append(path + [i])
                if cap is not None and len(cycles) >= cap:
                    return False
            elif dst > start and dst not in visited:
                visited.add(dst)
                ok = dfs(start, dst, path + [i], visited)
                visited.remove(dst)
                if not ok:
                    return False
        return True

    for start in range(G.node_count):
        if not dfs(start, start, [], set()):
            truncated = True
            break
    return cycles, truncated


def cycle_word(G: DeBruijnGraph, edge_cycle: list[int]) -> SymbolWord:
    """Symbol cycle traced by an edge cycle: first symbol of each edge word."""
    return tuple(G.edges[i].word[0] for i in edge_cycle)


def cycle_mean(G: DeBruijnGraph, edge_cycle: list[int]) -> Fraction:
    total = sum((G.edges[i].weight for i in edge_cycle), Fraction(0))
    return total / len(edge_cycle)
