"""Monotone sweep solver for the discrete Dirichlet problem L[u] = f(u).

Each interior point is repeatedly replaced by the exact root of its local
one-dimensional balance (an exact scalar solve, no damping), in ascending
index order for Gauss-Seidel or against a frozen snapshot for Jacobi.
Started from the sub- or super-envelope the iterates are monotone and stay
inside the envelope bracket, which is the discrete shape of the Perron
construction.  Convergence requires both a small sup-norm change and a small
interior residual.

Uniqueness away from f = 0 is not claimed: with start="both" the solver runs
from both envelopes and reports the sup-norm gap between the two limits.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from . import _kernels
from .barriers import envelope_constant, sub_envelope, super_envelope
from .errors import ConfigurationError, ConvergenceError
from .geometry import BoundaryData, PointSet
from .operator import ScalarField, residual_norm
from .sources import MonotoneSource

__all__ = [
    "SolverConfig",
    "SolveReport",
    "local_update",
    "sweep",
    "solve_dirichlet",
    "solve_homogeneous_closed_form",
    "monotone_bracket",
]

_SCHEMES = ("gauss_seidel", "jacobi")


@dataclass(frozen=True)
class SolverConfig:
    scheme: str = "gauss_seidel"
    sweep_tol: float = 1e-10
    residual_tol: float = 1e-8
    max_sweeps: int = 10000
    bisection_tol: float = 1e-12
    start: Union[str, ScalarField] = "lower_envelope"

    def __post_init__(self):
        if self.scheme not in _SCHEMES:
            raise ConfigurationError(f"scheme must be one of {_SCHEMES}, got {self.scheme!r}")
        for name in ("sweep_tol", "residual_tol", "bisection_tol"):
            if getattr(self, name) <= 0.0:
                raise ConfigurationError(f"{name} must be positive")
        if self.max_sweeps < 1:
            raise ConfigurationError("max_sweeps must be >= 1")
        if isinstance(self.start, str) and self.start not in (
            "lower_envelope", "upper_envelope", "both"
        ):
            raise ConfigurationError(f"unknown start {self.start!r}")


@dataclass
class SolveReport:
    sweeps_used: int
    final_change: float
    final_residual: float
    wall_time: float
    lambda_bound: float
    bracket_gap: Optional[float] = None


def _recip_weights(ps: PointSet) -> np.ndarray:
    with np.errstate(divide="ignore"):
        w = 1.0 / ps.power_dist
    np.fill_diagonal(w, 0.0)
    return np.ascontiguousarray(w)


def local_update(u: ScalarField, i: int, f: MonotoneSource, tol: float = 1e-12) -> float:
    """Exact scalar solve at interior index i against the current neighbors.

    Returns the unique t where the weighted max/min balance of the other
    points meets f(t); found by bisection to ``tol`` with doubling bracket
    expansion (60-doubling cap).
    """
    ps = u.ps
    if i not in ps.interior_idx:
        raise ConfigurationError(f"local_update needs an interior index, got {i}")
    if tol <= 0.0:
        raise ConfigurationError("tol must be positive")
    w = _recip_weights(ps)
    t = _kernels.local_root(u.values, w[i], i, *f.kernel_args(), tol)
    if np.isnan(t):
        raise ConvergenceError(
            "local bisection bracket failed to close after 60 doublings; "
            "inputs are inconsistent"
        )
    return float(t)


def sweep(u: ScalarField, f: MonotoneSource, cfg: SolverConfig):
    """Apply one full sweep of local updates; boundary rows are untouched.

    Returns (updated field, sup-norm change).  Gauss-Seidel updates in place
    in ascending index order; Jacobi reads every neighbor from the incoming
    field.
    """
    ps = u.ps
    vals = u.values.copy()
    w = _recip_weights(ps)
    kern = _kernels.gauss_seidel_sweep if cfg.scheme == "gauss_seidel" else _kernels.jacobi_sweep
    change = kern(vals, w, ps.interior_idx, *f.kernel_args(), cfg.bisection_tol)
    if np.isnan(change):
        raise ConvergenceError(
            "local bisection bracket failed to close after 60 doublings; "
            "inputs are inconsistent"
        )
    return ScalarField(ps, vals), float(change)


def monotone_bracket(ps: PointSet, g: BoundaryData, f: MonotoneSource):
    """(lower, upper) envelope fields bracketing every solution."""
    c = envelope_constant(ps, g, f)
    return sub_envelope(ps, g, c), super_envelope(ps, g, c)


def _run_sweeps(ps, gvals, f, cfg, start_vals):
    u = start_vals.copy()
    u[ps.boundary_idx] = gvals
    w = _recip_weights(ps)
    kern = _kernels.gauss_seidel_sweep if cfg.scheme == "gauss_seidel" else _kernels.jacobi_sweep
    ka = f.kernel_args()
    change = np.inf
    res = np.inf
    for sweeps in range(1, cfg.max_sweeps + 1):
        change = kern(u, w, ps.interior_idx, *ka, cfg.bisection_tol)
        if np.isnan(change):
            raise ConvergenceError(
                "local bisection bracket failed to close after 60 doublings; "
                "inputs are inconsistent"
            )
        if change < cfg.sweep_tol:
            res = residual_norm(ScalarField(ps, u), f)
            if res < cfg.residual_tol:
                return u, sweeps, change, res
    res = residual_norm(ScalarField(ps, u), f)
    raise ConvergenceError(
        f"no convergence in {cfg.max_sweeps} sweeps "
        f"(change={change:.3e}, residual={res:.3e})",
        field=ScalarField(ps, u),
        report=SolveReport(cfg.max_sweeps, float(change), float(res), 0.0, np.nan),
    )


def solve_dirichlet(ps: PointSet, g: BoundaryData, f: MonotoneSource, cfg: SolverConfig = SolverConfig()):
    """Solve L[u] = f(u) in the interior with u = g on the boundary.

    Sweeps run from the configured start until the sup-norm change drops
    below sweep_tol and the interior residual below residual_tol.  The result
    carries g bit-for-bit on the boundary and sits inside the envelope
    bracket.  start="both" solves from both envelopes, reports the sup-norm
    gap between the limits, and returns the lower-start limit (the discrete
    Perron value); sweeps_used then counts both runs.

    Raises ConvergenceError (with the partial field attached) if max_sweeps
    is exhausted.
    """
    if g.ps is not ps:
        raise ConfigurationError("boundary data is bound to a different point set")
    if g.beta >= ps.alpha:
        raise ConfigurationError("solve_dirichlet needs g.beta < alpha")
    t0 = time.perf_counter()
    lower, upper = monotone_bracket(ps, g, f)
    lam = max(float(np.abs(lower.values).max()), float(np.abs(upper.values).max()))

    if isinstance(cfg.start, ScalarField):
        if cfg.start.ps is not ps:
            raise ConfigurationError("start field is bound to a different point set")
        starts = [cfg.start.values]
    elif cfg.start == "lower_envelope":
        starts = [lower.values]
    elif cfg.start == "upper_envelope":
        starts = [upper.values]
    else:  # both
        starts = [lower.values, upper.values]

    runs = []
    total_sweeps = 0
    for sv in starts:
        u, sweeps, change, res = _run_sweeps(ps, g.values, f, cfg, sv)
        runs.append((u, change, res))
        total_sweeps += sweeps
    gap = None
    if len(runs) == 2:
        gap = float(np.abs(runs[0][0] - runs[1][0]).max())
    u, change, res = runs[0]
    report = SolveReport(
        sweeps_used=total_sweeps,
        final_change=float(change),
        final_residual=float(res),
        wall_time=time.perf_counter() - t0,
        lambda_bound=lam,
        bracket_gap=gap,
    )
    return ScalarField(ps, u), report


def solve_homogeneous_closed_form(ps: PointSet, g: BoundaryData, tol: float = 1e-12) -> ScalarField:
    """Boundary-only oracle for f = 0: per interior point, the root of the
    two-sided balance over boundary values alone, bisected within
    [min g, max g].  Boundary points copy g."""
    vals = np.empty(ps.n)
    vals[ps.boundary_idx] = g.values
    pb = ps.points[ps.boundary_idx]
    gb = g.values
    gmin = float(gb.min())
    gmax = float(gb.max())
    for i in ps.interior_idx:
        d = np.sqrt(((pb - ps.points[i]) ** 2).sum(axis=1)) ** ps.alpha
        lo, hi = gmin, gmax
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            q = (gb - mid) / d
            if q.max() + q.min() >= 0.0:
                lo = mid
            else:
                hi = mid
        vals[i] = 0.5 * (lo + hi)
    return ScalarField(ps, vals)
