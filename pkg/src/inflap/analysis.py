"""Hölder-seminorm measurement and comparison checks for solved fields.

The global beta-seminorm of a solution is bounded by an explicit constant
built from the boundary seminorm, the domain diameter and the source values
at plus/minus the boundary sup-norm; holder_report packages the measured
seminorms against that bound.  Local seminorms over interior sub-boxes are
reported as diagnostics without a pass/fail threshold, since coarse grids
make any local constant loose.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .barriers import r_star
from .errors import ConfigurationError
from .geometry import BoundaryData, PointSet
from .operator import ScalarField
from .sources import MonotoneSource

__all__ = [
    "HolderReport",
    "holder_seminorm",
    "holder_bound",
    "holder_report",
    "check_comparison",
]

_CHUNK = 256


@dataclass
class HolderReport:
    beta: float
    global_seminorm: float
    local_seminorms: List[Tuple[str, float]]
    bound: float
    satisfied: bool


def holder_seminorm(u: ScalarField, beta: float, region: Optional[Sequence[int]] = None) -> float:
    """Largest |u(x)-u(y)| / |x-y|^beta over distinct pairs in the region.

    The region defaults to every point.  Exact pairwise scan, chunked to
    keep the distance blocks small.
    """
    if not 0.0 < beta <= 1.0:
        raise ConfigurationError(f"beta must lie in (0, 1], got {beta}")
    ps = u.ps
    if region is None:
        idx = np.arange(ps.n, dtype=np.int64)
    else:
        idx = np.asarray(region, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= ps.n):
            raise ConfigurationError("region contains out-of-range indices")
    if idx.size < 2:
        raise ConfigurationError("holder_seminorm needs a region with at least two points")
    pts = ps.points[idx]
    vals = u.values[idx]
    best = 0.0
    for a in range(0, idx.size, _CHUNK):
        block = pts[a:a + _CHUNK]
        dv = np.abs(vals[a:a + _CHUNK, None] - vals[None, :])
        dd = np.sqrt(((block[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1)) ** beta
        with np.errstate(divide="ignore", invalid="ignore"):
            q = dv / dd
        q[~np.isfinite(q)] = 0.0
        if q.size:
            best = max(best, float(q.max()))
    return best


def holder_bound(ps: PointSet, g: BoundaryData, f: MonotoneSource) -> float:
    """Explicit global beta-seminorm bound for the Dirichlet solution.

    max of the boundary seminorm and diam^(alpha-beta) times the positive
    part of f at +/-||g||_inf, inflated by 1/(1 - cone ratio).  Independent
    of any obstacle ramp width, so it is uniform along an eps-schedule.
    """
    if g.beta >= ps.alpha:
        raise ConfigurationError("holder_bound needs g.beta < alpha")
    _, ratio = r_star(ps.alpha, g.beta)
    gn = g.sup_norm
    scale = ps.diameter ** (ps.alpha - g.beta) / (1.0 - ratio)
    up = max(float(f(gn)), 0.0)
    down = max(-float(f(-gn)), 0.0)
    return max(g.seminorm, scale * up, scale * down)


def _interior_boxes(ps: PointSet, splits: int) -> List[Tuple[str, np.ndarray]]:
    ii = ps.interior_idx
    pts = ps.points[ii]
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    cell = np.minimum(((pts - lo) / span * splits).astype(int), splits - 1)
    out = []
    for flat in range(splits ** ps.dim):
        key = np.unravel_index(flat, (splits,) * ps.dim)
        mask = np.all(cell == np.asarray(key), axis=1)
        members = ii[mask]
        if members.size >= 2:
            out.append(("box" + "".join(str(k) for k in key), members))
    return out


def holder_report(
    u: ScalarField,
    beta: float,
    bound: float = math.inf,
    splits: int = 2,
) -> HolderReport:
    """Measure the global seminorm and per-sub-box interior seminorms.

    ``satisfied`` compares the global seminorm against ``bound``; with the
    default infinite bound it is vacuously true.
    """
    if splits < 1:
        raise ConfigurationError("splits must be >= 1")
    global_s = holder_seminorm(u, beta)
    locs = [(name, holder_seminorm(u, beta, idx)) for name, idx in _interior_boxes(u.ps, splits)]
    return HolderReport(
        beta=beta,
        global_seminorm=global_s,
        local_seminorms=locs,
        bound=bound,
        satisfied=bool(global_s <= bound),
    )


def check_comparison(u: ScalarField, v: ScalarField, tol: float = 1e-9):
    """Ordering check: if u <= v + tol on the boundary, is u <= v + tol
    everywhere?

    Returns (True, None) when the conclusion holds, and also when the
    boundary premise already fails (nothing is claimed then).  Otherwise
    (False, first violating interior-or-boundary index).
    """
    if u.ps is not v.ps:
        raise ConfigurationError("check_comparison needs fields on the same point set")
    if tol < 0.0:
        raise ConfigurationError("tol must be non-negative")
    ps = u.ps
    b = ps.boundary_idx
    if np.any(u.values[b] > v.values[b] + tol):
        return True, None
    bad = np.flatnonzero(u.values > v.values + tol)
    if bad.size:
        return False, int(bad[0])
    return True, None
