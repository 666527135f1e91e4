"""Dirichlet and obstacle problems for the Holder infinity Laplacian on
finite point sets: the two-sided extreme-quotient operator, cone-barrier
envelopes, monotone sweep solvers and seminorm diagnostics."""

from .analysis import (
    HolderReport,
    check_comparison,
    holder_bound,
    holder_report,
    holder_seminorm,
)
from .barriers import (
    BarrierSpec,
    barrier_spec,
    envelope_constant,
    p_of_r,
    psi,
    psi_upper_bound,
    r_star,
    sub_envelope,
    super_envelope,
)
from .errors import ConfigurationError, ConvergenceError
from .geometry import BoundaryData, PointSet, alpha_distance, build_grid, diameter
from .invariants import FamilyResult, SuiteReport, run_invariant_suite
from .io import (
    export_solution,
    load_pointset,
    load_solution,
    save_pointset,
    write_barrier_table,
    write_trace,
)
from .obstacle import (
    ObstacleConfig,
    ObstacleResult,
    coincidence_set,
    f_epsilon,
    solve_obstacle,
)
from .operator import ScalarField, l_full, l_minus, l_plus, residual, residual_norm
from .solver import (
    SolveReport,
    SolverConfig,
    local_update,
    monotone_bracket,
    solve_dirichlet,
    solve_homogeneous_closed_form,
    sweep,
)
from .sources import MonotoneSource, parse_source

__version__ = "0.1.0"

__all__ = [
    "PointSet",
    "BoundaryData",
    "ScalarField",
    "MonotoneSource",
    "BarrierSpec",
    "SolverConfig",
    "SolveReport",
    "ObstacleConfig",
    "ObstacleResult",
    "HolderReport",
    "SuiteReport",
    "FamilyResult",
    "ConfigurationError",
    "ConvergenceError",
    "alpha_distance",
    "build_grid",
    "diameter",
    "parse_source",
    "l_plus",
    "l_minus",
    "l_full",
    "residual",
    "residual_norm",
    "psi",
    "p_of_r",
    "r_star",
    "barrier_spec",
    "psi_upper_bound",
    "envelope_constant",
    "sub_envelope",
    "super_envelope",
    "local_update",
    "sweep",
    "monotone_bracket",
    "solve_dirichlet",
    "solve_homogeneous_closed_form",
    "f_epsilon",
    "solve_obstacle",
    "coincidence_set",
    "holder_seminorm",
    "holder_bound",
    "holder_report",
    "check_comparison",
    "run_invariant_suite",
    "save_pointset",
    "load_pointset",
    "export_solution",
    "load_solution",
    "write_trace",
    "write_barrier_table",
]
