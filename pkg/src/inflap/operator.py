"""Discrete nonlocal operators: the sup/inf difference-quotient pair.

For a field u on a PointSet, l_plus is the max over all other points of
(u(y) - u(x)) / |y - x|^alpha, l_minus the min, and l_full their sum.  Both
extremes range over the whole point set (interior and boundary).  Every
evaluation is a full O(N) scan of one row of the cached alpha-power distance
matrix; quotients are computed by division so exact cancellations (for
instance a sampled cone against its own apex) survive in floating point.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .geometry import PointSet
from .sources import MonotoneSource

__all__ = ["ScalarField", "l_plus", "l_minus", "l_full", "residual", "residual_norm"]


@dataclass(eq=False)
class ScalarField:
    """One real value per point of a bound PointSet."""

    ps: PointSet
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if vals.shape != (self.ps.n,):
            raise ConfigurationError(
                f"field must have shape ({self.ps.n},), got {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ConfigurationError("field values must be finite")
        self.values = vals

    def copy(self) -> "ScalarField":
        return ScalarField(self.ps, self.values.copy())

    def boundary_values(self) -> np.ndarray:
        return self.values[self.ps.boundary_idx]


def _quotients(u: ScalarField, i: int) -> np.ndarray:
    """Difference quotients from point i to every other point; self = NaN."""
    row = u.ps.power_dist[i]
    with np.errstate(divide="ignore", invalid="ignore"):
        q = (u.values - u.values[i]) / row
    return q


def l_plus(u: ScalarField, i: int) -> float:
    """sup part: max over j != i of (u(j) - u(i)) / |x_j - x_i|^alpha."""
    q = _quotients(u, i)
    q[i] = -np.inf
    return float(np.max(q))


def l_minus(u: ScalarField, i: int) -> float:
    """inf part: min over j != i of the same quotients."""
    q = _quotients(u, i)
    q[i] = np.inf
    return float(np.min(q))


def l_full(u: ScalarField, i: int) -> float:
    """Full operator value l_plus + l_minus at point i."""
    q = _quotients(u, i)
    q[i] = -np.inf
    hi = np.max(q)
    q[i] = np.inf
    lo = np.min(q)
    return float(hi + lo)


def residual(u: ScalarField, f: MonotoneSource, i: int) -> float:
    """Signed equation residual l_full(u, i) - f(u(i)) at an interior index."""
    if i not in u.ps.interior_idx:
        raise ConfigurationError(f"residual is defined on interior indices; got {i}")
    return l_full(u, i) - f(u.values[i])


def residual_norm(u: ScalarField, f: MonotoneSource, region=None) -> float:
    """Sup of |residual| over the region (default: all interior indices).

    Zero on an empty region.  The region must be a subset of the interior.
    """
    ps = u.ps
    if region is None:
        region = ps.interior_idx
    region = np.asarray(region, dtype=np.int64)
    if region.size == 0:
        return 0.0
    if not np.isin(region, ps.interior_idx).all():
        raise ConfigurationError("residual region must contain interior indices only")
    vals = u.values
    fvals = np.asarray(f(vals[region]), dtype=np.float64)
    worst = 0.0
    for lo in range(0, region.size, 256):
        idx = region[lo:lo + 256]
        rows = ps.power_dist[idx]
        with np.errstate(divide="ignore", invalid="ignore"):
            q = (vals[None, :] - vals[idx][:, None]) / rows
        sub = np.arange(idx.size)
        q[sub, idx] = -np.inf
        hi = q.max(axis=1)
        q[sub, idx] = np.inf
        lo_q = q.min(axis=1)
        worst = max(worst, float(np.abs(hi + lo_q - fvals[lo:lo + 256]).max()))
    return worst
