"""Obstacle problem L[u] = f(u) on {u > 0}, u >= 0, u = g on the boundary.

When f(0) = 0 the constraint is invisible to the scheme: f is extended by
zero on the negative axis and the plain Dirichlet solve already lands on a
nonnegative field.  When f(0) > 0 the source is replaced by a linear ramp
f_eps (zero below 0, f above eps) and eps is driven down a geometric
schedule with warm starts; the solutions u_eps converge uniformly and the
limit vanishes on the coincidence set.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import List, Tuple

import numpy as np

from .errors import ConfigurationError, ConvergenceError
from .geometry import BoundaryData, PointSet
from .operator import ScalarField
from .solver import SolveReport, SolverConfig, monotone_bracket, solve_dirichlet
from .sources import MonotoneSource

__all__ = [
    "ObstacleConfig",
    "ObstacleResult",
    "f_epsilon",
    "solve_obstacle",
    "coincidence_set",
]


@dataclass(frozen=True)
class ObstacleConfig:
    eps0: float = 1e-1
    eps_factor: float = 0.5
    eps_steps: int = 20
    coincidence_tol: float = 1e-8
    inner: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.eps0 <= 0.0:
            raise ConfigurationError("eps0 must be positive")
        if not 0.0 < self.eps_factor < 1.0:
            raise ConfigurationError("eps_factor must lie in (0, 1)")
        if self.eps_steps < 1:
            raise ConfigurationError("eps_steps must be >= 1")
        if self.coincidence_tol <= 0.0:
            raise ConfigurationError("coincidence_tol must be positive")
        if self.eps0 * self.eps_factor ** self.eps_steps <= 0.0:
            raise ConfigurationError("epsilon schedule underflows to zero")


@dataclass
class ObstacleResult:
    u: ScalarField
    coincidence: np.ndarray
    eps_trace: List[Tuple[float, float]]
    report: SolveReport
    # one inner-solve report per schedule step, parallel to eps_trace
    step_reports: List[SolveReport] = field(default_factory=list)


def f_epsilon(f: MonotoneSource, eps: float) -> MonotoneSource:
    """Ramp modification: 0 for t <= 0, (t/eps)*f(eps) on (0, eps), f beyond.

    Continuous and non-decreasing whenever f is non-decreasing with
    f(0) >= 0; those preconditions are validated.
    """
    if eps <= 0.0:
        raise ConfigurationError("eps must be positive")
    return f.ramped(eps)


def coincidence_set(u: ScalarField, tol: float) -> np.ndarray:
    """Interior indices where u <= tol."""
    interior = u.ps.interior_idx
    return interior[u.values[interior] <= tol]


def _clamp_roundoff(vals: np.ndarray, tol: float) -> np.ndarray:
    out = vals.copy()
    mask = (out >= -tol) & (out < 0.0)
    out[mask] = 0.0
    return out


def solve_obstacle(
    ps: PointSet,
    g: BoundaryData,
    f: MonotoneSource,
    cfg: ObstacleConfig = ObstacleConfig(),
) -> ObstacleResult:
    """Solve the zero-obstacle problem.

    Requires g >= 0 on the boundary and f non-negative, non-decreasing on
    [0, inf).  With f(0) = 0 this is a single Dirichlet solve of the
    zero-extended source; otherwise each eps_k = eps0 * eps_factor^k gets a
    Dirichlet solve of f_{eps_k}, warm-started from the previous step (the
    first from max(lower envelope, 0)).  The schedule stops once consecutive
    solutions differ by less than inner.sweep_tol in sup-norm, or when
    eps_steps is exhausted.  Negative round-off within bisection_tol of zero
    is clamped before the coincidence set is read off.

    The aggregate report sums sweeps over all steps and carries the terminal
    step's change, residual and envelope bound.  The first eps_trace entry
    measures the move away from the starting field; it never triggers the
    stopping rule.
    """
    if np.any(g.values < 0.0):
        raise ConfigurationError("obstacle boundary data must be non-negative")
    t0 = time.perf_counter()

    if float(f(0.0)) == 0.0:
        fz = f.zero_extended()
        lower, _ = monotone_bracket(ps, g, fz)
        start = ScalarField(ps, np.maximum(lower.values, 0.0))
        u, rep = solve_dirichlet(ps, g, fz, replace(cfg.inner, start=start))
        vals = _clamp_roundoff(u.values, cfg.inner.bisection_tol)
        u = ScalarField(ps, vals)
        rep = replace(rep, wall_time=time.perf_counter() - t0)
        tol_eff = cfg.coincidence_tol * max(1.0, g.sup_norm)
        return ObstacleResult(u, coincidence_set(u, tol_eff), [], rep, [rep])

    trace: List[Tuple[float, float]] = []
    step_reports: List[SolveReport] = []
    f0 = f_epsilon(f, cfg.eps0)
    lower, _ = monotone_bracket(ps, g, f0)
    prev = np.maximum(lower.values, 0.0)
    prev[ps.boundary_idx] = g.values
    u_vals = prev
    total_sweeps = 0
    last_rep = None
    for k in range(cfg.eps_steps):
        eps_k = cfg.eps0 * cfg.eps_factor ** k
        f_k = f_epsilon(f, eps_k)
        icfg = replace(cfg.inner, start=ScalarField(ps, prev.copy()))
        try:
            u_field, rep = solve_dirichlet(ps, g, f_k, icfg)
        except ConvergenceError as err:
            err.eps_trace = trace
            raise
        u_vals = u_field.values
        change = float(np.abs(u_vals - prev).max())
        trace.append((eps_k, change))
        step_reports.append(rep)
        total_sweeps += rep.sweeps_used
        last_rep = rep
        prev = u_vals
        if k >= 1 and change < cfg.inner.sweep_tol:
            break

    vals = _clamp_roundoff(u_vals, cfg.inner.bisection_tol)
    u = ScalarField(ps, vals)
    tol_eff = cfg.coincidence_tol * max(1.0, g.sup_norm)
    agg = SolveReport(
        sweeps_used=total_sweeps,
        final_change=last_rep.final_change,
        final_residual=last_rep.final_residual,
        wall_time=time.perf_counter() - t0,
        lambda_bound=last_rep.lambda_bound,
        bracket_gap=None,
    )
    return ObstacleResult(u, coincidence_set(u, tol_eff), trace, agg, step_reports)
