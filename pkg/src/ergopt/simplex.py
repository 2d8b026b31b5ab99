"""Dense two-phase simplex over exact rationals.

Small LPs only: every entry is a Fraction and the tableau is a list of lists,
so cost grows quickly with size. Bland's rule on both the entering and the
leaving choice, which rules out cycling. Infeasible problems come back with a
Farkas certificate that is re-verified against the constraint data before
being reported.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

MAX_PIVOTS = 1_000_000


class UnboundedError(ValueError):
    """The feasible set is unbounded in the improving direction."""


class InfeasibleError(ValueError):
    """No feasible point exists; carries a verified Farkas certificate."""

    def __init__(self, message: str, certificate: "FarkasCertificate"):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True)
class FarkasCertificate:
    """Row multipliers y with y.A <= 0 on every column and y.b > 0.

    Equality rows carry a free-sign multiplier, inequality rows a
    nonpositive one (their slack column forces it). The combination of the
    constraint rows by y is then a contradiction: a nonnegative combination
    of nonnegative variables required to be strictly positive.
    """

    eq_multipliers: tuple[Fraction, ...]
    ub_multipliers: tuple[Fraction, ...]
    value: Fraction  # y.b, strictly positive
    verified: bool


@dataclass(frozen=True)
class LPSolution:
    objective: Fraction
    x: tuple[Fraction, ...]
    basis: tuple[int, ...]
    iterations: int
    dropped_rows: tuple[int, ...]  # redundant equality rows eliminated


def _as_fraction_matrix(rows, width: int, name: str) -> list[list[Fraction]]:
    out = []
    for i, row in enumerate(rows):
        row = [Fraction(v) for v in row]
        if len(row) != width:
            raise ValueError(f"{name} row {i} has {len(row)} entries, expected {width}")
        out.append(row)
    return out


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, col: int) -> None:
    piv = T[r][col]
    T[r] = [v / piv for v in T[r]]
    prow = T[r]
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[col]
        if f:
            T[i] = [a - f * b for a, b in zip(row, prow)]
    basis[r] = col


def _bland_step(
    T: list[list[Fraction]],
    basis: list[int],
    m: int,
    allowed: range | list[int],
) -> bool:
    """One pivot of the bottom objective row; False when already optimal."""
    obj = T[-1]
    col = next((j for j in allowed if obj[j] < 0), None)
    if col is None:
        return False
    best = None
    leave = -1
    for i in range(m):
        a = T[i][col]
        if a > 0:
            ratio = T[i][-1] / a
            if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                best = ratio
                leave = i
    if leave < 0:
        raise UnboundedError(f"column {col} unbounded")
    _pivot(T, basis, leave, col)
    return True


def solve_lp(
    c,
    A_eq=None,
    b_eq=None,
    A_ub=None,
    b_ub=None,
    maximize: bool = True,
) -> LPSolution:
    """Optimize c.x over {A_eq x = b_eq, A_ub x <= b_ub, x >= 0}.

    Raises InfeasibleError (with certificate) or UnboundedError. Inputs may
    be int, Fraction, or float; floats are converted to their exact binary
    value, so callers wanting a tolerance band must widen b themselves.
    """
    c = [Fraction(v) for v in c]
    n = len(c)
    eq = _as_fraction_matrix(A_eq or [], n, "A_eq")
    beq = [Fraction(v) for v in (b_eq or [])]
    ub = _as_fraction_matrix(A_ub or [], n, "A_ub")
    bub = [Fraction(v) for v in (b_ub or [])]
    if len(beq) != len(eq) or len(bub) != len(ub):
        raise ValueError("constraint matrix and rhs sizes disagree")

    n_eq, n_ub = len(eq), len(ub)
    m = n_eq + n_ub
    n_slack = n_ub
    n_art = m
    width = n + n_slack + n_art + 1

    # rows in standard form: [A | S | I | b], signs flipped so b >= 0
    rows: list[list[Fraction]] = []
    flipped: list[bool] = []
    for i in range(m):
        base = eq[i] if i < n_eq else ub[i - n_eq]
        b = beq[i] if i < n_eq else bub[i - n_eq]
        row = list(base) + [Fraction(0)] * (n_slack + n_art) + [b]
        if i >= n_eq:
            row[n + (i - n_eq)] = Fraction(1)
        if b < 0:
            row = [-v for v in row]
            flipped.append(True)
        else:
            flipped.append(False)
        row[n + n_slack + i] = Fraction(1)
        rows.append(row)

    basis = [n + n_slack + i for i in range(m)]
    art0 = n + n_slack

    # phase 1: drive the artificial total to zero
    obj1 = [Fraction(0)] * width
    for j in range(art0, art0 + n_art):
        obj1[j] = Fraction(1)
    for row in rows:
        obj1 = [a - b for a, b in zip(obj1, row)]
    T = rows + [obj1]
    iters = 0
    while _bland_step(T, basis, m, range(width - 1)):
        iters += 1
        if iters > MAX_PIVOTS:
            raise RuntimeError("pivot cap exceeded")
    phase1 = -T[-1][-1]
    if phase1 > 0:
        # y_i = 1 - reduced cost on the i-th artificial column, then unflip
        y = [Fraction(1) - T[-1][art0 + i] for i in range(m)]
        y = [-yi if flipped[i] else yi for i, yi in enumerate(y)]
        ok = _verify_farkas(y, eq, beq, ub, bub, n)
        cert = FarkasCertificate(
            eq_multipliers=tuple(y[:n_eq]),
            ub_multipliers=tuple(y[n_eq:]),
            value=sum(
                (yi * b for yi, b in zip(y, beq + bub)), Fraction(0)
            ),
            verified=ok,
        )
        raise InfeasibleError(f"infeasible (artificial residue {phase1})", cert)

    # pivot lingering zero-level artificials out; a row with no real pivot
    # entry is a redundant constraint and is dropped
    T.pop()
    rowid = list(range(m))
    dropped: list[int] = []
    r = 0
    while r < len(T):
        if basis[r] >= art0:
            col = next(
                (j for j in range(art0) if T[r][j] != 0),
                None,
            )
            if col is None:
                dropped.append(rowid[r])
                T.pop(r)
                basis.pop(r)
                rowid.pop(r)
                continue
            _pivot(T, basis, r, col)
        r += 1
    m = len(T)

    # phase 2 on the real objective; artificial columns never re-enter
    fcost = [-v for v in c] if maximize else list(c)
    obj2 = fcost + [Fraction(0)] * (n_slack + n_art + 1)
    for i in range(m):
        f = obj2[basis[i]]
        if f:
            obj2 = [a - f * b for a, b in zip(obj2, T[i])]
    T.append(obj2)
    allowed = list(range(n + n_slack))
    while _bland_step(T, basis, m, allowed):
        iters += 1
        if iters > MAX_PIVOTS:
            raise RuntimeError("pivot cap exceeded")

    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    value = T[-1][-1] if maximize else -T[-1][-1]
    return LPSolution(
        objective=value,
        x=tuple(x),
        basis=tuple(basis),
        iterations=iters,
        dropped_rows=tuple(dropped),
    )


def _verify_farkas(y, eq, beq, ub, bub, n: int) -> bool:
    n_eq = len(eq)
    for j in range(n):
        col = sum(
            (y[i] * (eq[i][j] if i < n_eq else ub[i - n_eq][j]) for i in range(len(y))),
            Fraction(0),
        )
        if col > 0:
            return False
    # slack columns: multiplier of each inequality row must be <= 0
    if any(yi > 0 for yi in y[n_eq:]):
        return False
    val = sum((yi * b for yi, b in zip(y, beq + bub)), Fraction(0))
    return val > 0
