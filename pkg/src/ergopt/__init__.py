"""Ergodic optimization on the full shift: maximizing measures, subactions,
equilibrium states, and rotation sets, with an exact rational lane wherever
the data is rational."""

from .config import BudgetExceeded, DEFAULT_BUDGET, enumeration_budget
from .debruijn import DeBruijnGraph, build_debruijn, cycle_mean, karp_alpha
from .doubling import DoublingResult, doubling_solve
from .figures import (
    potential_rows,
    render_svg,
    residual_rows,
    subaction_rows,
    write_csv,
    write_svg,
)
from .measures import (
    BernoulliMeasure,
    EntropyValue,
    InvariantMeasure,
    MarkovMeasure,
    PeriodicOrbitMeasure,
    depth_profile,
    entropy_closed_form,
    entropy_truncated,
    integrate,
    periodic_measure,
)
from .potentials import (
    BUILTIN_GRID_FUNCTIONS,
    GridPotential,
    LocallyConstantPotential,
)
from .potfile import (
    PotentialFormatError,
    dumps_potential,
    load_potential,
    loads_potential,
    save_potential,
)
from .rotation import (
    DEFAULT_BAND,
    BetaResult,
    InfeasibleRotationError,
    OccupationMeasure,
    OracleResult,
    RotationSetResult,
    RotationSpec,
    beta_function,
    flow_decomposition,
    periodic_oracle,
    rotation_set,
    rotation_vector,
)
from .simplex import (
    FarkasCertificate,
    InfeasibleError,
    LPSolution,
    UnboundedError,
    solve_lp,
)
from .subaction import (
    ContactLocus,
    InvalidSubactionError,
    OrbitsResult,
    ResidualField,
    SubactionField,
    SubactionReport,
    contact_locus,
    exact_subaction,
    half_iteration,
    maximizing_orbits,
    residual,
    residual_at_point,
    verify_subaction,
)
from .sweep import (
    RateFunctionResult,
    SlopeCheckResult,
    SweepResult,
    beta_sweep,
    ldp_rate,
    ldp_slope_check,
)
from .transfer import (
    ConvergenceError,
    EquilibriumResult,
    TransferMatrix,
    build_transfer,
    equilibrium,
)
from .words import (
    PointSpec,
    all_words,
    format_word,
    minimal_period,
    parse_word,
    shift_metric,
    word_interval,
    word_to_real,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_GRID_FUNCTIONS",
    "BernoulliMeasure",
    "BetaResult",
    "BudgetExceeded",
    "ContactLocus",
    "ConvergenceError",
    "DEFAULT_BAND",
    "DEFAULT_BUDGET",
    "DeBruijnGraph",
    "DoublingResult",
    "EntropyValue",
    "EquilibriumResult",
    "FarkasCertificate",
    "GridPotential",
    "InfeasibleError",
    "InfeasibleRotationError",
    "InvalidSubactionError",
    "InvariantMeasure",
    "LPSolution",
    "LocallyConstantPotential",
    "MarkovMeasure",
    "OccupationMeasure",
    "OracleResult",
    "OrbitsResult",
    "PeriodicOrbitMeasure",
    "PointSpec",
    "PotentialFormatError",
    "RateFunctionResult",
    "ResidualField",
    "RotationSetResult",
    "RotationSpec",
    "SlopeCheckResult",
    "SubactionField",
    "SubactionReport",
    "SweepResult",
    "TransferMatrix",
    "UnboundedError",
    "all_words",
    "beta_function",
    "beta_sweep",
    "build_debruijn",
    "build_transfer",
    "contact_locus",
    "cycle_mean",
    "depth_profile",
    "doubling_solve",
    "dumps_potential",
    "entropy_closed_form",
    "entropy_truncated",
    "enumeration_budget",
    "equilibrium",
    "exact_subaction",
    "flow_decomposition",
    "format_word",
    "half_iteration",
    "integrate",
    "karp_alpha",
    "ldp_rate",
    "ldp_slope_check",
    "load_potential",
    "loads_potential",
    "maximizing_orbits",
    "minimal_period",
    "parse_word",
    "periodic_measure",
    "periodic_oracle",
    "potential_rows",
    "render_svg",
    "residual",
    "residual_at_point",
    "residual_rows",
    "rotation_set",
    "rotation_vector",
    "save_potential",
    "shift_metric",
    "solve_lp",
    "subaction_rows",
    "verify_subaction",
    "word_interval",
    "word_to_real",
    "write_csv",
    "write_svg",
]
