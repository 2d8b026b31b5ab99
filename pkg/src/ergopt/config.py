"""Global knobs: enumeration budget and numerical tolerance defaults."""
from __future__ import annotations

import os

DEFAULT_BUDGET = 2**20

# Iteration defaults shared by the fixed-point solvers.
ITERATION_TOL = 1e-12
MAX_ITERS = 100_000

# Residual-sign tolerance for float-mode subaction checks.
FLOAT_RESIDUAL_TOL = 1e-9


def enumeration_budget() -> int:
    """Cap on table/edge/cycle enumeration sizes.

    Reads ERGOPT_BUDGET from the environment; falls back to 2**20 entries.
    """
    raw = os.environ.get("ERGOPT_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"ERGOPT_BUDGET must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError(f"ERGOPT_BUDGET must be positive, got {value}")
    return value


def check_budget(size: int, what: str, budget: int | None = None) -> None:
    """Raise if an enumeration of `size` entries would exceed the budget."""
    cap = enumeration_budget() if budget is None else budget
    if size > cap:
        raise BudgetExceeded(
            f"{what} needs {size} entries, over the enumeration budget {cap} "
            f"(raise ERGOPT_BUDGET to override)"
        )


class BudgetExceeded(RuntimeError):
    pass
