"""Transfer operator for beta-weighted locally constant potentials.

The matrix lives on the de Bruijn states with entries sum_{edges v->w}
exp(beta*A); everything is kept in log-space so beta in the hundreds is
routine. The power iteration runs on the diagonally shifted matrix M + tI,
t = exp(max beta*A): the shift leaves the leading eigenvector alone but damps
the oscillatory subdominant spectrum of nearly periodic matrices (a plain
power iteration stalls on two-state period-two structures at large beta).
The reported eigenvalue and residual are evaluated on the unshifted matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .debruijn import DeBruijnGraph, build_debruijn
from .measures import (
    BernoulliMeasure,
    InvariantMeasure,
    MarkovMeasure,
    entropy_closed_form,
    integrate,
)
from .potentials import LocallyConstantPotential
from .words import SymbolWord


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class TransferMatrix:
    beta: float
    graph: DeBruijnGraph
    log_entries: np.ndarray  # states x states; -inf where no edge

    @property
    def states(self) -> tuple[SymbolWord, ...]:
        return self.graph.nodes


def build_transfer(A: LocallyConstantPotential, beta: float) -> TransferMatrix:
    G = build_debruijn(A)
    n = G.node_count
    L = np.full((n, n), -np.inf)
    for e in G.edges:
        L[e.src, e.dst] = np.logaddexp(L[e.src, e.dst], beta * float(e.weight))
    return TransferMatrix(beta=beta, graph=G, log_entries=L)


def _log_power_iteration(
    L: np.ndarray, tol: float, max_iters: int
) -> tuple[np.ndarray, float, float, int]:
    """Leading log-eigenvector of exp(L); returns (log h, log lambda, residual, iters).

    Residual is the spread of log((M h)_v / h_v) across states, which vanishes
    exactly at the eigenvector. The shift is re-centered every step at the
    current eigenvalue estimate; a shift of the wrong magnitude either leaves
    the period-two oscillation undamped or swamps the spectral gap.
    """
    lh = np.zeros(L.shape[0])
    spread = float("inf")
    for it in range(1, max_iters + 1):
        applied = np.logaddexp.reduce(L + lh[None, :], axis=1)
        rayleigh = applied - lh
        loglam = float(np.mean(rayleigh))
        spread = float(np.max(rayleigh) - np.min(rayleigh))
        if spread <= max(tol, 8e-16 * (1.0 + abs(loglam))):
            resid = float(np.max(np.abs(rayleigh - loglam)))
            return lh, loglam, resid, it
        nxt = np.logaddexp(applied, loglam + lh)
        nxt -= np.max(nxt)
        lh = nxt
    raise ConvergenceError(
        f"power iteration stalled after {max_iters} iterations "
        f"(residual spread {spread:.3e}, tol {tol:.1e})"
    )


@dataclass(frozen=True)
class EquilibriumResult:
    """Equilibrium state of beta*A with its thermodynamic bookkeeping.

    The measure is the stationary chain p_vw = M_vw h_w / (lambda h_v) (a
    Bernoulli product when the potential has depth 1). log_pi/log_edge_p hold
    the same data in log-space so cylinder masses stay usable far past float
    underflow; see log_cylinder_mass.
    """

    beta: float
    pressure: float
    measure: InvariantMeasure
    energy: float
    entropy: float
    eigen_residual: float
    variational_defect: float
    iterations: int
    graph: DeBruijnGraph
    log_pi: tuple[float, ...]
    log_edge_p: tuple[float, ...]  # aligned with graph.edges

    def log_cylinder_mass(self, word: SymbolWord) -> float:
        """log mu(cylinder of word), computed entirely in log-space."""
        r = self.graph.depth - 1
        word = tuple(word)
        m = len(word)
        if m == 0:
            return 0.0
        if m < r:
            logs = [
                lp
                for state, lp in zip(self.graph.nodes, self.log_pi)
                if state[:m] == word
            ]
            return float(np.logaddexp.reduce(logs)) if logs else -math.inf
        edge_lp = {e.word: lp for e, lp in zip(self.graph.edges, self.log_edge_p)}
        idx = 0
        for s in word[:r]:
            idx = idx * self.graph.d + s
        total = self.log_pi[idx]
        for t in range(m - r):
            total += edge_lp[word[t : t + r + 1]]
        return float(total)

    def cylinder_mass(self, word: SymbolWord) -> float:
        return math.exp(self.log_cylinder_mass(word))


def equilibrium(
    A: LocallyConstantPotential,
    beta: float,
    tol: float = 1e-13,
    max_iters: int = 50_000,
) -> EquilibriumResult:
    """Pressure, equilibrium measure, and the variational bookkeeping for beta*A.

    Raises ConvergenceError if the power iteration stalls or the variational
    identity pressure = entropy + beta*energy fails beyond 1e-10*(1+|P|).
    """
    T = build_transfer(A, beta)
    G = T.graph
    n = G.node_count
    lh, loglam, resid_r, it_r = _log_power_iteration(T.log_entries, tol, max_iters)
    lnu, loglam_l, resid_l, it_l = _log_power_iteration(
        T.log_entries.T, tol, max_iters
    )
    pressure = loglam
    resid = max(resid_r, resid_l, abs(loglam - loglam_l))

    # Edge transition probabilities, renormalized exactly per row in log-space.
    raw = [
        beta * float(e.weight) + lh[e.dst] - lh[e.src] for e in G.edges
    ]
    row_logsum = np.full(n, -np.inf)
    for e, lp in zip(G.edges, raw):
        row_logsum[e.src] = np.logaddexp(row_logsum[e.src], lp)
    log_edge_p = tuple(lp - row_logsum[e.src] for e, lp in zip(G.edges, raw))

    # Stationary vector: least-squares solve of pi (P - I) = 0, sum pi = 1.
    P = np.zeros((n, n))
    for e, lp in zip(G.edges, log_edge_p):
        P[e.src, e.dst] += math.exp(lp)
    M = np.vstack([P.T - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[n] = 1.0
    pi, *_ = np.linalg.lstsq(M, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    log_pi = tuple(
        math.log(p) if p > 0 else -math.inf for p in pi
    )

    if G.depth == 1:
        weights = [0.0] * G.d
        for e, lp in zip(G.edges, log_edge_p):
            weights[e.word[0]] = math.exp(lp)
        total = sum(weights)
        measure: InvariantMeasure = BernoulliMeasure(
            G.d, tuple(w / total for w in weights)
        )
    else:
        trans = [[0.0] * n for _ in range(n)]
        for e, lp in zip(G.edges, log_edge_p):
            trans[e.src][e.dst] = math.exp(lp)
        measure = MarkovMeasure(
            G.d,
            G.depth - 1,
            tuple(tuple(row) for row in trans),
            tuple(float(p) for p in pi),
        )

    energy = float(integrate(measure, A))
    entropy = entropy_closed_form(measure).value
    defect = abs(pressure - (entropy + beta * energy))
    if defect > 1e-10 * (1.0 + abs(pressure)):
        raise ConvergenceError(
            f"variational identity violated: |P - (h + beta*energy)| = {defect:.3e} "
            f"at beta = {beta}"
        )
    return EquilibriumResult(
        beta=beta,
        pressure=pressure,
        measure=measure,
        energy=energy,
        entropy=entropy,
        eigen_residual=resid,
        variational_defect=defect,
        iterations=it_r + it_l,
        graph=G,
        log_pi=log_pi,
        log_edge_p=log_edge_p,
    )
