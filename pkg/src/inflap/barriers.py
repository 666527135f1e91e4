"""Cone barriers |x - x0|^beta, their operator bounds, and Perron envelopes.

The barrier analysis rests on two constants: r_star, the unique root past
r0 = (1 - beta)/(alpha - beta) of

    p(r) = (beta - alpha) r^beta - beta r^(beta-1) + alpha,

and psi_ratio = Psi(r_star) with Psi(r) = (r^beta - 1)/(r - 1)^alpha, which is
strictly below 1.  They yield a negative upper bound for the operator applied
to a cone, an explicit envelope constant C, and the sub/super envelopes
(pointwise extremes of boundary-anchored cones) that bracket every solve.

p is evaluated in the rearranged form beta*(r^beta - r^(beta-1)) - alpha*(r^beta - 1),
identical algebraically, so p(1) = 0 holds exactly in floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError
from .geometry import BoundaryData, PointSet
from .operator import ScalarField
from .sources import MonotoneSource

__all__ = [
    "BarrierSpec",
    "barrier_spec",
    "psi",
    "p_of_r",
    "r_star",
    "psi_upper_bound",
    "envelope_constant",
    "sub_envelope",
    "super_envelope",
]


def psi(x, x0, beta: float):
    """Cone value |x - x0|^beta.

    Coordinates live on the last axis, so a (n, dim) array of points yields
    n values; a single point yields a float.
    """
    x = np.asarray(x, dtype=np.float64)
    x0 = np.asarray(x0, dtype=np.float64)
    if x.ndim == 0:
        x = x[None]
    if x0.ndim == 0:
        x0 = x0[None]
    d = np.sqrt(np.sum((x - x0) ** 2, axis=-1))
    out = d ** beta
    if out.ndim == 0:
        return float(out)
    return out


def p_of_r(r: float, alpha: float, beta: float) -> float:
    """The root function whose zero past r0 is r_star; p(1) = 0 exactly."""
    rb = r ** beta
    return beta * (rb - r ** (beta - 1.0)) - alpha * (rb - 1.0)


def r_star(alpha: float, beta: float, tol: float = 1e-12):
    """Return (r_star, psi_ratio) for 0 < beta < alpha < 1.

    p is positive at r0 = (1-beta)/(alpha-beta) and strictly decreasing past
    it, so the root is bracketed by doubling the upper end from 2*r0 and then
    bisected to ``tol`` absolute.  The spurious root at r = 1 lies below r0
    and is excluded by construction.
    """
    if not 0.0 < beta < alpha < 1.0:
        raise ConfigurationError(
            f"r_star needs 0 < beta < alpha < 1; got alpha={alpha}, beta={beta}"
        )
    r0 = (1.0 - beta) / (alpha - beta)
    lo = r0 * (1.0 + 1e-9)
    hi = 2.0 * r0
    for _ in range(200):
        if p_of_r(hi, alpha, beta) < 0.0:
            break
        hi *= 2.0
    else:  # pragma: no cover - p -> -inf guarantees a sign change
        raise ConfigurationError("failed to bracket r_star")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if p_of_r(mid, alpha, beta) > 0.0:
            lo = mid
        else:
            hi = mid
    rs = 0.5 * (lo + hi)
    ratio = (rs ** beta - 1.0) / (rs - 1.0) ** alpha
    return rs, ratio


@dataclass(frozen=True)
class BarrierSpec:
    """A cone barrier scale*|x - x0|^beta with its derived constants.

    r0, r_star and psi_ratio are present only for beta < alpha; the beta =
    alpha bound does not need them.
    """

    alpha: float
    beta: float
    x0: np.ndarray
    scale: float = 1.0
    r0: Optional[float] = None
    r_star: Optional[float] = None
    psi_ratio: Optional[float] = None


def barrier_spec(alpha: float, beta: float, x0, scale: float = 1.0) -> BarrierSpec:
    """Build a BarrierSpec, computing r_star/psi_ratio when beta < alpha."""
    if not 0.0 < alpha < 1.0:
        raise ConfigurationError(f"barrier alpha must be in (0, 1), got {alpha}")
    if not 0.0 < beta <= alpha:
        raise ConfigurationError(f"barrier beta must be in (0, alpha], got {beta}")
    if scale < 0.0:
        raise ConfigurationError("barrier scale must be >= 0")
    x0 = np.asarray(x0, dtype=np.float64).reshape(-1)
    if beta < alpha:
        rs, ratio = r_star(alpha, beta)
        return BarrierSpec(alpha, beta, x0, scale, (1.0 - beta) / (alpha - beta), rs, ratio)
    return BarrierSpec(alpha, beta, x0, scale)


def psi_upper_bound(x, spec: BarrierSpec, diam: float) -> float:
    """Negative upper bound for l_full of the unit cone |x - x0|^beta at x.

    beta < alpha:  |x - x0|^(beta - alpha) * (psi_ratio - 1).
    beta = alpha:  -1 + (R^alpha - 1)/(R - 1)^alpha with R = diam/|x - x0|;
                   the sup part contributes nothing when R <= 1 (x already at
                   maximal distance), leaving -1.
    Undefined at the apex x = x0.
    """
    x = np.asarray(x, dtype=np.float64)
    d = float(np.sqrt(np.sum((x - spec.x0) ** 2)))
    if d == 0.0:
        raise ConfigurationError("barrier bound is undefined at the apex x = x0")
    if spec.beta < spec.alpha:
        return d ** (spec.beta - spec.alpha) * (spec.psi_ratio - 1.0)
    big_r = diam / d
    if big_r <= 1.0:
        return -1.0
    return -1.0 + (big_r ** spec.alpha - 1.0) / (big_r - 1.0) ** spec.alpha


def _neg_part(x: float) -> float:
    return max(-x, 0.0)


def envelope_constant(ps: PointSet, g: BoundaryData, f: MonotoneSource) -> float:
    """Single cone constant C serving both envelope directions.

    C = max(g.seminorm,
            diam^(alpha-beta) * max(f(|g|_inf), [f(-|g|_inf)]_-, 0) / (1 - psi_ratio)).
    """
    alpha, beta = ps.alpha, g.beta
    if beta >= alpha:
        raise ConfigurationError("envelopes need g.beta < alpha")
    _, ratio = r_star(alpha, beta)
    gn = g.sup_norm
    strength = max(float(f(gn)), _neg_part(float(f(-gn))), 0.0)
    return max(g.seminorm, ps.diameter ** (alpha - beta) * strength / (1.0 - ratio))


def _cone_field(ps: PointSet, g: BoundaryData, c: float, sign: float) -> ScalarField:
    cones = g.values[None, :] + sign * c * ps.boundary_power_dist(g.beta)
    vals = cones.max(axis=1) if sign < 0 else cones.min(axis=1)
    vals[ps.boundary_idx] = g.values
    return ScalarField(ps, vals)


def sub_envelope(ps: PointSet, g: BoundaryData, c: float) -> ScalarField:
    """Pointwise max of downward boundary cones g(x0) - c|x - x0|^beta.

    Equals g exactly on the boundary whenever c >= g.seminorm.
    """
    return _cone_field(ps, g, c, -1.0)


def super_envelope(ps: PointSet, g: BoundaryData, c: float) -> ScalarField:
    """Pointwise min of upward boundary cones g(x0) + c|x - x0|^beta."""
    return _cone_field(ps, g, c, +1.0)
