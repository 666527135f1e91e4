"""Finite point-set domains: interior/boundary partition and the alpha-metric.

The domain is an arbitrary finite point cloud split into interior and boundary
indices.  The nonlocal operators only ever need pairwise Euclidean distances
raised to the exponent alpha, so no mesh topology is stored.  Everything here
is immutable after construction and safe to share between workers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "PointSet",
    "BoundaryData",
    "alpha_distance",
    "build_grid",
    "diameter",
]

#: Points closer than this are rejected so 1/|y-x|^alpha stays bounded.
MIN_SEPARATION = 1e-12


def alpha_distance(x, y, alpha: float) -> float:
    """Euclidean distance between x and y raised to alpha.

    Returns 0.0 exactly for coincident points.  alpha must lie in (0, 1].
    """
    if not 0.0 < alpha <= 1.0:
        raise ConfigurationError(f"alpha must be in (0, 1], got {alpha}")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    d = float(np.sqrt(np.sum((x - y) ** 2)))
    if d == 0.0:
        return 0.0
    return d ** alpha


def _pairwise_scan(points: np.ndarray, chunk: int = 512):
    """Return (min positive distance, max distance) over all pairs."""
    n = points.shape[0]
    dmin = np.inf
    dmax = 0.0
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        block = np.sqrt(((points[lo:hi, None, :] - points[None, :, :]) ** 2).sum(-1))
        # mask the diagonal of this block (and the symmetric duplicates are harmless)
        rows = np.arange(lo, hi)
        block[rows - lo, rows] = np.inf
        dmin = min(dmin, float(block.min()))
        block[rows - lo, rows] = 0.0
        dmax = max(dmax, float(block.max()))
    return dmin, dmax


@dataclass(frozen=True, eq=False)
class PointSet:
    """Discretized closed domain: coordinates plus an interior/boundary split.

    Arrays are frozen (read-only) after validation.  ``diameter`` is the max
    pairwise Euclidean distance, computed once.  The alpha-power distance
    matrix used by the operators is cached lazily; it holds N^2 doubles, which
    is the intended desk-scale trade-off.
    """

    points: np.ndarray
    boundary_idx: np.ndarray
    alpha: float
    interior_idx: np.ndarray = field(init=False)
    diameter: float = field(init=False)

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] < 1:
            raise ConfigurationError("points must be a (n, dim) array with n >= 2")
        if not np.all(np.isfinite(pts)):
            raise ConfigurationError("points must be finite")
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigurationError(f"alpha must be in (0, 1], got {self.alpha}")
        n = pts.shape[0]
        bidx = np.unique(np.asarray(self.boundary_idx, dtype=np.int64))
        if bidx.size == 0:
            raise ConfigurationError("boundary index set must be non-empty")
        if bidx.size and (bidx[0] < 0 or bidx[-1] >= n):
            raise ConfigurationError("boundary index out of range")
        mask = np.ones(n, dtype=bool)
        mask[bidx] = False
        iidx = np.nonzero(mask)[0].astype(np.int64)
        if iidx.size == 0:
            raise ConfigurationError("interior index set must be non-empty")
        dmin, dmax = _pairwise_scan(pts)
        if dmin < MIN_SEPARATION:
            raise ConfigurationError(
                f"minimum pairwise distance {dmin:.3e} below {MIN_SEPARATION:.0e}"
            )
        pts.setflags(write=False)
        bidx.setflags(write=False)
        iidx.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "boundary_idx", bidx)
        object.__setattr__(self, "interior_idx", iidx)
        object.__setattr__(self, "diameter", dmax)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @cached_property
    def power_dist(self) -> np.ndarray:
        """Full |x_i - x_j|^alpha matrix with a zero diagonal (read-only)."""
        d = np.sqrt(((self.points[:, None, :] - self.points[None, :, :]) ** 2).sum(-1))
        np.fill_diagonal(d, 0.0)
        m = d ** self.alpha
        np.fill_diagonal(m, 0.0)
        m.setflags(write=False)
        return m

    def boundary_power_dist(self, beta: float) -> np.ndarray:
        """(n, n_boundary) matrix of |x_i - x_b|^beta for all i, boundary b."""
        d = np.sqrt(
            ((self.points[:, None, :] - self.points[self.boundary_idx][None, :, :]) ** 2).sum(-1)
        )
        return d ** beta


def diameter(ps: PointSet) -> float:
    """Max pairwise Euclidean distance (cached on the point set)."""
    return ps.diameter


def build_grid(counts, bounds, alpha: float) -> PointSet:
    """Uniform lattice on a box; boundary = lattice points on the box faces.

    counts: int or one int per axis (each >= 3 so the interior is non-empty).
    bounds: (lo, hi) or one pair per axis.
    """
    counts = np.atleast_1d(np.asarray(counts, dtype=np.int64))
    dim = counts.size
    bounds = np.asarray(bounds, dtype=np.float64).reshape(-1, 2)
    if bounds.shape[0] == 1 and dim > 1:
        bounds = np.repeat(bounds, dim, axis=0)
    if bounds.shape[0] != dim:
        raise ConfigurationError("bounds count does not match axis count")
    if np.any(counts < 3):
        raise ConfigurationError("counts must be >= 3 per axis (no interior otherwise)")
    if np.any(bounds[:, 0] >= bounds[:, 1]):
        raise ConfigurationError("bounds must satisfy lo < hi per axis")
    axes = [np.linspace(lo, hi, int(c)) for c, (lo, hi) in zip(counts, bounds)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    on_boundary = np.zeros(pts.shape[0], dtype=bool)
    for k in range(dim):
        on_boundary |= (pts[:, k] == bounds[k, 0]) | (pts[:, k] == bounds[k, 1])
    return PointSet(pts, np.nonzero(on_boundary)[0], alpha)


@dataclass(frozen=True, eq=False)
class BoundaryData:
    """Boundary trace g with its beta-Holder seminorm over boundary pairs."""

    ps: PointSet
    values: np.ndarray
    beta: float
    seminorm: float = field(init=False)

    def __post_init__(self):
        vals = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        nb = self.ps.boundary_idx.size
        if vals.shape != (nb,):
            raise ConfigurationError(
                f"boundary values must have shape ({nb},), got {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ConfigurationError("boundary values must be finite")
        if not 0.0 < self.beta <= self.ps.alpha:
            raise ConfigurationError(
                f"beta must be in (0, alpha]; got beta={self.beta}, alpha={self.ps.alpha}"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "seminorm", _boundary_seminorm(self.ps, vals, self.beta))

    @property
    def sup_norm(self) -> float:
        return float(np.abs(self.values).max())


def _boundary_seminorm(ps: PointSet, values: np.ndarray, beta: float) -> float:
    pb = ps.points[ps.boundary_idx]
    if pb.shape[0] < 2:
        return 0.0
    d = np.sqrt(((pb[:, None, :] - pb[None, :, :]) ** 2).sum(-1))
    np.fill_diagonal(d, 1.0)
    q = np.abs(values[:, None] - values[None, :]) / d ** beta
    np.fill_diagonal(q, 0.0)
    return float(q.max())
