"""Randomized self-checks of the operator's structural identities.

Five families, each run for a configurable number of trials from a seeded
generator, so a report is reproducible from (seed, trials) alone:

  alpha_triangle        |x-z|^a <= |x-y|^a + |y-z|^a, with forced equality
                        draws and occasional a = 1
  duality               l_full(-u) = -l_full(u), exact in floating point
                        because every step is a sign flip
  translation_scaling   l_full(u + c) = l_full(u) and
                        l_full(lam*u) = lam*l_full(u) for lam > 0, within a
                        forward rounding bound
  quadratic_perturbation adding d*|x - x0|^2 moves l_full by at most
                        4|d|*diam^(2-alpha)
  holder_stability      |l_full(u+w) - l_full(u)| <= 2*K^alpha*(2*||w||)^
                        (1-alpha) with K the Lipschitz seminorm of w

A margin is the slack left in the inequality; any negative margin counts as
a failure and the first offending instance is kept in a JSON-ready form so
the exact case can be replayed.  Draws that produce no interior point are
skipped, not failed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .errors import ConfigurationError
from .geometry import PointSet
from .operator import ScalarField, l_full

__all__ = ["FamilyResult", "SuiteReport", "run_invariant_suite"]


@dataclass
class FamilyResult:
    name: str
    passes: int
    failures: int
    skips: int
    worst_margin: float
    failure_case: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passes": self.passes,
            "failures": self.failures,
            "skips": self.skips,
            "worst_margin": self.worst_margin,
            "failure_case": self.failure_case,
        }


@dataclass
class SuiteReport:
    seed: int
    trials: int
    families: List[FamilyResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(f.failures == 0 for f in self.families)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "ok": self.ok,
            "families": [f.to_dict() for f in self.families],
        }


def _draw_set(rng) -> Optional[PointSet]:
    # small chance of a degenerate draw with no interior: callers skip it
    if rng.random() < 0.05:
        return None
    dim = int(rng.integers(1, 3))
    n = int(rng.integers(2, 29))
    while True:
        pts = rng.normal(0.0, 1.0, size=(n, dim))
        d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1)
        np.fill_diagonal(d2, np.inf)
        if d2.min() > 1e-12:
            break
    nb = int(rng.integers(1, n))
    bidx = np.sort(rng.choice(n, size=nb, replace=False))
    alpha = float(rng.uniform(0.05, 0.999))
    return PointSet(pts, bidx, alpha)


def _min_power_dist(ps: PointSet, i: int) -> float:
    row = ps.power_dist[i]
    mask = np.ones(ps.n, dtype=bool)
    mask[i] = False
    return float(row[mask].min())


def _triangle_trial(rng):
    dim = int(rng.integers(1, 4))
    x, y, z = rng.normal(0.0, 2.0, size=(3, dim))
    r = rng.random()
    if r < 0.05:
        y = x.copy()
    elif r < 0.10:
        y = z.copy()
    alpha = 1.0 if rng.random() < 0.1 else float(rng.uniform(0.01, 1.0))
    lhs = float(np.linalg.norm(x - z)) ** alpha
    rhs = float(np.linalg.norm(x - y)) ** alpha + float(np.linalg.norm(y - z)) ** alpha
    margin = rhs - lhs + 1e-12 * max(1.0, rhs)
    case = {
        "family": "alpha_triangle",
        "alpha": alpha,
        "x": x.tolist(),
        "y": y.tolist(),
        "z": z.tolist(),
        "lhs": lhs,
        "rhs": rhs,
    }
    return margin, case


def _field_case(name: str, ps: PointSet, i: int, **extra) -> dict:
    case = {
        "family": name,
        "alpha": ps.alpha,
        "points": ps.points.tolist(),
        "boundary": ps.boundary_idx.tolist(),
        "index": i,
    }
    case.update(extra)
    return case


def _duality_trial(rng):
    ps = _draw_set(rng)
    if ps is None:
        return None
    u = rng.normal(0.0, 3.0, ps.n)
    i = int(rng.choice(ps.interior_idx))
    a = l_full(ScalarField(ps, u), i)
    b = l_full(ScalarField(ps, -u), i)
    margin = -abs(a + b)
    return margin, _field_case("duality", ps, i, u=u.tolist(), forward=a, negated=b)


def _translation_scaling_trial(rng):
    ps = _draw_set(rng)
    if ps is None:
        return None
    u = rng.normal(0.0, 2.0, ps.n)
    i = int(rng.choice(ps.interior_idx))
    c = float(rng.normal(0.0, 5.0))
    lam = float(rng.uniform(0.1, 10.0))
    base = l_full(ScalarField(ps, u), i)
    shifted = l_full(ScalarField(ps, u + c), i)
    scaled = l_full(ScalarField(ps, lam * u), i)
    unorm = float(np.abs(u).max())
    tol = 1e-12 * (1.0 + abs(c) + (1.0 + lam) * unorm) / _min_power_dist(ps, i)
    err = max(abs(shifted - base), abs(scaled - lam * base))
    margin = tol - err
    return margin, _field_case(
        "translation_scaling", ps, i,
        u=u.tolist(), c=c, lam=lam, base=base, shifted=shifted, scaled=scaled,
    )


def _quadratic_trial(rng):
    ps = _draw_set(rng)
    if ps is None:
        return None
    u = rng.normal(0.0, 2.0, ps.n)
    delta = float(rng.uniform(-2.0, 2.0))
    x0 = ps.points[int(rng.integers(0, ps.n))]
    pert = delta * ((ps.points - x0) ** 2).sum(axis=1)
    i = int(rng.choice(ps.interior_idx))
    a = l_full(ScalarField(ps, u), i)
    b = l_full(ScalarField(ps, u + pert), i)
    unorm = float(np.abs(u).max())
    slack = 1e-12 * (1.0 + unorm + abs(delta) * ps.diameter ** 2) / _min_power_dist(ps, i)
    bound = 4.0 * abs(delta) * ps.diameter ** (2.0 - ps.alpha) + slack
    margin = bound - abs(b - a)
    return margin, _field_case(
        "quadratic_perturbation", ps, i,
        u=u.tolist(), delta=delta, x0=x0.tolist(), moved=b, base=a, bound=bound,
    )


def _stability_trial(rng):
    ps = _draw_set(rng)
    if ps is None:
        return None
    u = rng.normal(0.0, 2.0, ps.n)
    w = rng.normal(0.0, float(rng.uniform(0.01, 2.0)), ps.n)
    i = int(rng.choice(ps.interior_idx))
    dist = np.sqrt(((ps.points[:, None, :] - ps.points[None, :, :]) ** 2).sum(axis=-1))
    np.fill_diagonal(dist, np.inf)
    lip = float((np.abs(w[:, None] - w[None, :]) / dist).max())
    wnorm = float(np.abs(w).max())
    a = l_full(ScalarField(ps, u), i)
    b = l_full(ScalarField(ps, u + w), i)
    slack = 1e-12 * (1.0 + float(np.abs(u).max()) + wnorm) / _min_power_dist(ps, i)
    bound = 2.0 * lip ** ps.alpha * (2.0 * wnorm) ** (1.0 - ps.alpha) + slack
    margin = bound - abs(b - a)
    return margin, _field_case(
        "holder_stability", ps, i,
        u=u.tolist(), w=w.tolist(), moved=b, base=a, bound=bound,
    )


_FAMILIES: List[Tuple[str, Callable]] = [
    ("alpha_triangle", _triangle_trial),
    ("duality", _duality_trial),
    ("translation_scaling", _translation_scaling_trial),
    ("quadratic_perturbation", _quadratic_trial),
    ("holder_stability", _stability_trial),
]


def run_invariant_suite(seed: int, trials: int) -> SuiteReport:
    """Run every family for ``trials`` draws; deterministic given ``seed``."""
    if trials < 1:
        raise ConfigurationError("trials must be >= 1")
    report = SuiteReport(seed=seed, trials=trials)
    for k, (name, fn) in enumerate(_FAMILIES):
        rng = np.random.default_rng([seed, k])
        passes = failures = skips = 0
        worst = math.inf
        failure_case = None
        for t in range(trials):
            out = fn(rng)
            if out is None:
                skips += 1
                continue
            margin, case = out
            worst = min(worst, margin)
            if margin >= 0.0:
                passes += 1
            else:
                failures += 1
                if failure_case is None:
                    case["trial"] = t
                    case["margin"] = margin
                    failure_case = case
        report.families.append(
            FamilyResult(name, passes, failures, skips, worst, failure_case)
        )
    return report
