"""Acceptance suite: one test per shipped guarantee.

Each test prints a single pass/fail line with the measured numbers.  Pytest
hides stdout for passing tests; run with -s to see every line.
"""
import time

import numpy as np

from inflap import (
    BoundaryData,
    MonotoneSource,
    ObstacleConfig,
    PointSet,
    ScalarField,
    SolverConfig,
    barrier_spec,
    build_grid,
    diameter,
    holder_bound,
    holder_seminorm,
    l_full,
    monotone_bracket,
    p_of_r,
    psi,
    psi_upper_bound,
    r_star,
    residual_norm,
    solve_dirichlet,
    solve_homogeneous_closed_form,
    solve_obstacle,
    sweep,
)
from inflap.cli import main as cli_main


def _line(num: int, label: str, ok: bool, detail: str) -> bool:
    print(f"criterion {num:02d} {label}: {'pass' if ok else 'FAIL'} ({detail})")
    return ok


def _segment(n: int, alpha: float = 0.5, beta: float = 0.25):
    """1D grid on [0,1] with g equal to the endpoint coordinate (0 and 1)."""
    ps = build_grid(n, (0.0, 1.0), alpha)
    g = BoundaryData(ps, ps.points[ps.boundary_idx, 0], beta)
    return ps, g


def _square(side: int, alpha: float = 0.5, beta: float = 0.25):
    """2D side x side grid on [0,1]^2 with g equal to the first coordinate."""
    ps = build_grid([side, side], [(0.0, 1.0), (0.0, 1.0)], alpha)
    g = BoundaryData(ps, ps.points[ps.boundary_idx, 0], beta)
    return ps, g


def test_criterion_01_barrier_constant_roots():
    t0 = time.perf_counter()
    grid = (0.25, 0.5, 0.75, 0.9)
    ok = True
    for a in grid:
        for b in grid:
            if b >= a:
                continue
            rs, ratio = r_star(a, b)
            ok &= abs(p_of_r(rs, a, b)) <= 1e-10
            ok &= rs > (1.0 - b) / (a - b)
            ok &= 0.0 < ratio < 1.0

    # independent oracle for the pinned pair: bisect the sign change of a
    # centered finite-difference slope of the ratio curve itself
    a, b = 0.5, 0.25

    def ratio_curve(r):
        return (r ** b - 1.0) / (r - 1.0) ** a

    def slope(r):
        h = 1e-7 * r
        return ratio_curve(r + h) - ratio_curve(r - h)

    lo, hi = 1.0 + 1e-6, 1e6
    assert slope(lo) > 0.0 > slope(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if slope(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    oracle = 0.5 * (lo + hi)

    rs, ratio = r_star(a, b)
    ok &= abs(rs - oracle) <= 1e-3
    ok &= abs(rs - 11.446) <= 0.01
    ok &= abs(ratio - 0.2597) <= 0.001
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1.0
    assert _line(1, "barrier constant roots", ok,
                 f"6 pairs, r*={rs:.6f} vs oracle {oracle:.6f}, "
                 f"ratio={ratio:.6f}, {elapsed:.3f}s")


def test_criterion_02_cone_bound_dominates_operator():
    t0 = time.perf_counter()
    alpha = 0.5
    cases = [
        build_grid(201, (0.0, 1.0), alpha),
        build_grid([41, 41], [(0.0, 1.0), (0.0, 1.0)], alpha),
    ]
    worst = np.inf
    ok = True
    for ps in cases:
        x0 = np.full(ps.points.shape[1], 0.5)
        i0 = int(np.argmin(((ps.points - x0) ** 2).sum(axis=1)))
        assert (ps.points[i0] == x0).all()
        diam = diameter(ps)
        for beta in (alpha / 2, alpha):
            spec = barrier_spec(alpha, beta, x0)
            u = ScalarField(ps, psi(ps.points, x0, beta))
            for i in range(ps.n):
                if i == i0:
                    continue
                margin = psi_upper_bound(ps.points[i], spec, diam) + 1e-12 - l_full(u, i)
                worst = min(worst, margin)
                if margin < 0.0:
                    ok = False
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 10.0
    assert _line(2, "cone bound dominates sampled operator", ok,
                 f"2 grids x 2 exponents, worst slack {worst:.3e}, {elapsed:.2f}s")


def test_criterion_03_single_interior_closed_form():
    worst = 0.0
    for alpha in (0.3, 0.5, 0.8):
        for x in (0.1, 0.25, 0.5, 0.9):
            ps = PointSet(np.array([[0.0], [x], [1.0]]), np.array([0, 2]), alpha)
            g = BoundaryData(ps, np.array([0.0, 1.0]), alpha / 2)
            u, _ = solve_dirichlet(ps, g, MonotoneSource.constant(0.0))
            exact = x ** alpha / (x ** alpha + (1.0 - x) ** alpha)
            worst = max(worst, abs(u.values[1] - exact))
    ok = worst <= 1e-10
    assert _line(3, "single interior matches closed form", ok,
                 f"12 cases, worst error {worst:.3e}")


def test_criterion_04_refinement_toward_closed_form():
    t0 = time.perf_counter()
    zero = MonotoneSource.constant(0.0)
    gaps = []
    for n in (26, 101, 401):
        ps, g = _segment(n)
        u, _ = solve_dirichlet(ps, g, zero)
        ref = solve_homogeneous_closed_form(ps, g)
        gaps.append(float(np.abs(u.values - ref.values).max()))
    elapsed = time.perf_counter() - t0
    mid_ok = gaps[1] < 5e-2
    trend_ok = gaps[0] > gaps[1] > gaps[2]
    ok = mid_ok and trend_ok and elapsed < 60.0
    assert _line(4, "refinement toward closed form", ok,
                 f"gaps {gaps[0]:.3e}, {gaps[1]:.3e}, {gaps[2]:.3e}; "
                 f"mid<5e-2 {mid_ok}, strictly decreasing {trend_ok}, {elapsed:.1f}s")


def _monotone_limit(u0, f, cfg, sign):
    """Sweep to convergence; fail if any step moves against the direction."""
    u = u0
    for _ in range(cfg.max_sweeps):
        nxt, change = sweep(u, f, cfg)
        if sign > 0 and not (nxt.values >= u.values - 1e-12).all():
            return u, False
        if sign < 0 and not (nxt.values <= u.values + 1e-12).all():
            return u, False
        u = nxt
        if change < cfg.sweep_tol:
            return u, True
    return u, False


def test_criterion_05_monotone_envelope_bracketing():
    cfg = SolverConfig()
    instances = [(_segment(26), 0.0), (_segment(101), 0.0),
                 (_segment(401), 0.0), (_segment(101), 1.0)]
    ok = True
    worst_gap = 0.0
    for (ps, g), level in instances:
        f = MonotoneSource.constant(level)
        lower, upper = monotone_bracket(ps, g, f)
        up, mono_up = _monotone_limit(lower, f, cfg, +1)
        down, mono_down = _monotone_limit(upper, f, cfg, -1)
        ok &= mono_up and mono_down
        for limit in (up, down):
            ok &= bool((limit.values >= lower.values - 1e-12).all())
            ok &= bool((limit.values <= upper.values + 1e-12).all())
        _, rep = solve_dirichlet(ps, g, f, SolverConfig(start="both"))
        worst_gap = max(worst_gap, rep.bracket_gap)
        ok &= rep.bracket_gap <= 1e-6
    assert _line(5, "monotone envelope bracketing", ok,
                 f"4 instances, worst two-sided gap {worst_gap:.3e}")


def test_criterion_06_holder_seminorm_within_bound():
    instances = [
        (_segment(26), 0.0),
        (_segment(101), 0.0),
        (_segment(101), 1.0),
        (_square(11), 0.5),
        (_square(21), 0.0),
    ]
    ok = True
    worst = -np.inf
    for (ps, g), level in instances:
        f = MonotoneSource.constant(level)
        u, _ = solve_dirichlet(ps, g, f)
        excess = holder_seminorm(u, 0.25) - holder_bound(ps, g, f)
        worst = max(worst, excess)
        ok &= excess <= 1e-9
    assert _line(6, "holder seminorm within a priori bound", ok,
                 f"5 solves, worst excess {worst:.3e}")


def test_criterion_07_obstacle_flat_case():
    ps = build_grid([21, 21], [(0.0, 1.0), (0.0, 1.0)], 0.5)
    g = BoundaryData(ps, np.zeros(ps.boundary_idx.size), 0.25)
    res = solve_obstacle(ps, g, MonotoneSource.constant(1.0), ObstacleConfig())
    flat = float(np.abs(res.u.values).max())
    full = np.array_equal(np.sort(res.coincidence), np.sort(ps.interior_idx))
    ok = flat == 0.0 and res.report.final_residual <= 1e-12 and full
    assert _line(7, "obstacle flat case", ok,
                 f"max|u|={flat:.1e}, residual {res.report.final_residual:.1e}, "
                 f"coincidence {res.coincidence.size}/{ps.interior_idx.size}")


def test_criterion_08_obstacle_continuation_consistency():
    ps, g = _segment(101)
    f = MonotoneSource.constant(0.1)
    res = solve_obstacle(ps, g, f, ObstacleConfig())
    changes = [c for _, c in res.eps_trace]
    tail = changes[-min(5, len(changes)):]
    trend_ok = all(tail[k + 1] <= tail[k] for k in range(len(tail) - 1))
    nonneg_ok = bool((res.u.values >= 0.0).all())
    region = ps.interior_idx[res.u.values[ps.interior_idx] > 1e-6]
    res_norm = residual_norm(res.u, f, region)
    boundary_ok = bool((res.u.values[ps.boundary_idx] == g.values).all())
    ok = trend_ok and nonneg_ok and res_norm <= 1e-6 and boundary_ok
    assert _line(8, "obstacle continuation consistency", ok,
                 f"{len(changes)} steps, tail {['%.2e' % c for c in tail]}, "
                 f"positivity-set residual {res_norm:.3e}")


def test_criterion_09_invariant_suite():
    t0 = time.perf_counter()
    code = cli_main(["verify", "--seed", "0", "--trials", "1000"])
    elapsed = time.perf_counter() - t0
    ok = code == 0 and elapsed < 30.0
    assert _line(9, "invariant suite", ok,
                 f"exit code {code}, {elapsed:.1f}s")


def test_criterion_10_performance_scaling():
    ps, g = _square(50)
    f = MonotoneSource.constant(1.0)
    cfg = SolverConfig(sweep_tol=1e-8, residual_tol=1e-8)
    t0 = time.perf_counter()
    _, rep = solve_dirichlet(ps, g, f, cfg)
    t_solve = time.perf_counter() - t0
    ok = t_solve < 60.0

    per_pair = []
    for side in (20, 30, 50):
        ps_s, g_s = _square(side)
        lower, _ = monotone_bracket(ps_s, g_s, f)
        sweep(lower, f, cfg)  # warm run before timing
        times = []
        for _ in range(5):
            t = time.perf_counter()
            sweep(lower, f, cfg)
            times.append(time.perf_counter() - t)
        per_pair.append(min(times) / ps_s.n ** 2)
    spread = max(per_pair) / min(per_pair)
    ok &= spread <= 2.0
    assert _line(10, "performance scaling", ok,
                 f"50x50 solve {t_solve:.1f}s in {rep.sweeps_used} sweeps, "
                 f"per-pair sweep cost spread x{spread:.2f}")
