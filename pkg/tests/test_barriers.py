"""Barrier constants and envelopes.

The cross-check oracle for r_star avoids the root function entirely: it
maximizes the ratio (r^beta - 1)/(r - 1)^alpha directly with bounded golden
search, so the two routes share no code beyond the ratio formula itself.
"""
import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from inflap import (
    BoundaryData,
    ConfigurationError,
    MonotoneSource,
    PointSet,
    barrier_spec,
    envelope_constant,
    holder_seminorm,
    p_of_r,
    psi,
    psi_upper_bound,
    r_star,
    sub_envelope,
    super_envelope,
)

PAIRS = [(0.5, 0.25), (0.75, 0.25), (0.75, 0.5), (0.9, 0.25), (0.9, 0.5), (0.9, 0.75)]


def ratio_fn(r, alpha, beta):
    return (r ** beta - 1.0) / (r - 1.0) ** alpha


def line_with_g(n=9, alpha=0.5, beta=0.25, gvals=(0.0, 0.0)):
    pts = np.linspace(0.0, 1.0, n)[:, None]
    ps = PointSet(pts, np.array([0, n - 1]), alpha)
    return ps, BoundaryData(ps, np.asarray(gvals, dtype=float), beta)


def test_p_at_one_is_exactly_zero():
    for a, b in [(0.5, 0.25), (0.9, 0.1), (0.7, 0.699), (0.31, 0.3)]:
        assert p_of_r(1.0, a, b) == 0.0


def test_p_sign_pattern_around_the_root():
    for a, b in PAIRS:
        r0 = (1.0 - b) / (a - b)
        rs, _ = r_star(a, b)
        assert p_of_r(r0 * (1.0 + 1e-6), a, b) > 0.0
        assert p_of_r(2.0 * rs, a, b) < 0.0


def test_r_star_frozen_pair():
    rs, ratio = r_star(0.5, 0.25)
    assert rs == pytest.approx(11.446, abs=0.01)
    assert ratio == pytest.approx(0.2597, abs=0.001)
    assert abs(p_of_r(rs, 0.5, 0.25)) < 1e-10


def test_r_star_basic_contract():
    for a, b in PAIRS:
        rs, ratio = r_star(a, b)
        assert rs > (1.0 - b) / (a - b)
        assert 0.0 < ratio < 1.0
        assert abs(p_of_r(rs, a, b)) < 1e-10


def test_r_star_matches_direct_maximization():
    for a, b in PAIRS:
        rs, ratio = r_star(a, b)
        res = minimize_scalar(
            lambda r: -ratio_fn(r, a, b),
            bounds=(1.0 + 1e-9, 1e6),
            method="bounded",
            options={"xatol": 1e-10},
        )
        assert rs == pytest.approx(res.x, rel=1e-6, abs=1e-6)
        assert ratio == pytest.approx(-res.fun, rel=1e-10)


def test_ratio_is_maximal_at_r_star():
    rs, ratio = r_star(0.5, 0.25)
    grid = np.linspace(1.0 + 1e-6, 8.0 * rs, 20001)
    vals = ratio_fn(grid, 0.5, 0.25)
    assert vals.max() <= ratio + 1e-9
    assert ratio_fn(rs, 0.5, 0.25) == pytest.approx(ratio, rel=1e-15)


def test_r_star_rejects_bad_exponents():
    with pytest.raises(ConfigurationError):
        r_star(0.5, 0.5)
    with pytest.raises(ConfigurationError):
        r_star(0.5, 0.6)
    with pytest.raises(ConfigurationError):
        r_star(1.0, 0.5)
    with pytest.raises(ConfigurationError):
        r_star(0.5, 0.0)


def test_psi_vectorizes_over_points():
    pts = np.array([[0.0, 0.0], [3.0, 4.0]])
    out = psi(pts, np.array([0.0, 0.0]), 0.5)
    assert out.shape == (2,)
    assert out[0] == 0.0
    assert out[1] == pytest.approx(np.sqrt(5.0))
    assert psi(np.array([3.0, 4.0]), np.array([0.0, 0.0]), 1.0) == pytest.approx(5.0)


def test_psi_upper_bound_branches():
    spec = barrier_spec(0.5, 0.25, np.array([0.0]))
    b = psi_upper_bound(np.array([0.5]), spec, 1.0)
    assert b < 0.0
    # the bound weakens (grows toward zero) with distance when beta < alpha
    b_far = psi_upper_bound(np.array([1.0]), spec, 1.0)
    assert b < b_far < 0.0
    with pytest.raises(ConfigurationError):
        psi_upper_bound(np.array([0.0]), spec, 1.0)  # apex

    eq = barrier_spec(0.5, 0.5, np.array([0.0]))
    assert psi_upper_bound(np.array([1.0]), eq, 1.0) == -1.0  # maximal distance
    inner = psi_upper_bound(np.array([0.25]), eq, 1.0)
    assert inner < 0.0
    assert inner == pytest.approx(-1.0 + (4.0 ** 0.5 - 1.0) / 3.0 ** 0.5)


def test_barrier_spec_validation():
    with pytest.raises(ConfigurationError):
        barrier_spec(1.2, 0.5, np.array([0.0]))
    with pytest.raises(ConfigurationError):
        barrier_spec(0.5, 0.75, np.array([0.0]))
    with pytest.raises(ConfigurationError):
        barrier_spec(0.5, 0.25, np.array([0.0]), scale=-1.0)
    spec = barrier_spec(0.5, 0.25, np.array([0.0]))
    assert spec.r_star is not None and 0.0 < spec.psi_ratio < 1.0


def test_envelope_constant_spec_cases():
    # pure boundary oscillation: C equals the boundary seminorm
    ps, g = line_with_g(gvals=(0.0, 1.0))
    assert envelope_constant(ps, g, MonotoneSource.constant(0.0)) == pytest.approx(1.0)

    # pure source: C = diam^(alpha-beta) * f / (1 - ratio)
    ps, g0 = line_with_g(gvals=(0.0, 0.0))
    _, ratio = r_star(0.5, 0.25)
    want = 1.0 / (1.0 - ratio)
    got = envelope_constant(ps, g0, MonotoneSource.constant(1.0))
    assert got == pytest.approx(want, rel=1e-12)
    assert got == pytest.approx(1.3508, abs=1e-4)

    # large boundary seminorm dominates the source term
    ps, g3 = line_with_g(gvals=(0.0, 3.0))
    assert envelope_constant(ps, g3, MonotoneSource.constant(1.0)) == pytest.approx(3.0)


def test_envelope_constant_uses_negative_part_of_f():
    ps, g = line_with_g(gvals=(0.0, 0.0))
    _, ratio = r_star(0.5, 0.25)
    got = envelope_constant(ps, g, MonotoneSource.constant(-2.0))
    assert got == pytest.approx(2.0 / (1.0 - ratio), rel=1e-12)


def test_envelope_constant_needs_beta_strictly_below_alpha():
    ps, _ = line_with_g()
    g = BoundaryData(ps, np.array([0.0, 0.0]), 0.5)
    with pytest.raises(ConfigurationError):
        envelope_constant(ps, g, MonotoneSource.constant(1.0))


def test_envelopes_bracket_and_pin_boundary():
    ps, g = line_with_g(n=17, gvals=(0.25, 1.0))
    c = envelope_constant(ps, g, MonotoneSource.constant(1.0))
    lo = sub_envelope(ps, g, c)
    hi = super_envelope(ps, g, c)
    assert np.array_equal(lo.values[ps.boundary_idx], g.values)
    assert np.array_equal(hi.values[ps.boundary_idx], g.values)
    assert np.all(lo.values <= hi.values + 1e-15)
    # each envelope inherits the cone seminorm
    assert holder_seminorm(lo, g.beta) <= c + 1e-12
    assert holder_seminorm(hi, g.beta) <= c + 1e-12
