"""njit kernels for the hot sweep loop.

The local update solves, by bisection, the strictly decreasing scalar balance

    max_{j != i} w_ij (u_j - t)  +  min_{j != i} w_ij (u_j - t)  =  f(t)

with w_ij the reciprocal alpha-power distances.  Source evaluation is inlined
from the MonotoneSource numeric encoding (kind, mod, params) so the whole
sweep stays in machine code.  A NaN return signals bracket-expansion failure;
the Python wrapper turns it into an exception.
"""
import numpy as np
from numba import njit

#: Bracket expansion gives up after this many doublings of the offset.
MAX_DOUBLINGS = 60


@njit(cache=True)
def feval(kind, mod, p0, p1, eps, tab_t, tab_y, t):
    """Evaluate the encoded source at scalar t."""
    tt = t
    scale = 1.0
    if mod == 1:  # zero extension
        if tt <= 0.0:
            return 0.0
    elif mod == 2:  # linear ramp on (0, eps)
        if tt <= 0.0:
            return 0.0
        if tt < eps:
            scale = tt / eps
            tt = eps
    if kind == 0:
        base = p0
    elif kind == 1:
        base = p0 * tt ** p1 if tt > 0.0 else 0.0
    else:
        n = tab_t.size
        if tt <= tab_t[0]:
            base = tab_y[0]
        elif tt >= tab_t[n - 1]:
            base = tab_y[n - 1]
        else:
            lo = 0
            hi = n - 1
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if tab_t[mid] <= tt:
                    lo = mid
                else:
                    hi = mid
            frac = (tt - tab_t[lo]) / (tab_t[hi] - tab_t[lo])
            base = tab_y[lo] + frac * (tab_y[hi] - tab_y[lo])
    return scale * base


@njit(cache=True)
def _balance(u, wrow, i, t, kind, mod, p0, p1, eps, tab_t, tab_y):
    """max + min of the weighted differences minus f(t); decreasing in t."""
    hi = -np.inf
    lo = np.inf
    for j in range(u.size):
        if j == i:
            continue
        q = wrow[j] * (u[j] - t)
        if q > hi:
            hi = q
        if q < lo:
            lo = q
    return hi + lo - feval(kind, mod, p0, p1, eps, tab_t, tab_y, t)


@njit(cache=True)
def local_root(u, wrow, i, kind, mod, p0, p1, eps, tab_t, tab_y, tol):
    """Bisect the local balance to ``tol``; NaN if the bracket never closes.

    The initial bracket is [min_j u_j, max_j u_j] over the other points.  The
    lower end is pushed down by a doubling offset while the balance is still
    negative there (a positive source drags the root below every neighbor);
    the upper end is expanded symmetrically for negative sources.
    """
    mn = np.inf
    mx = -np.inf
    for j in range(u.size):
        if j == i:
            continue
        v = u[j]
        if v < mn:
            mn = v
        if v > mx:
            mx = v
    lo = mn
    hi = mx
    if _balance(u, wrow, i, lo, kind, mod, p0, p1, eps, tab_t, tab_y) < 0.0:
        off = max(mx - mn, 1.0)
        hi = lo
        k = 0
        while True:
            lo = mn - off
            if _balance(u, wrow, i, lo, kind, mod, p0, p1, eps, tab_t, tab_y) >= 0.0:
                break
            off *= 2.0
            k += 1
            if k > MAX_DOUBLINGS:
                return np.nan
    elif _balance(u, wrow, i, hi, kind, mod, p0, p1, eps, tab_t, tab_y) > 0.0:
        off = max(mx - mn, 1.0)
        lo = hi
        k = 0
        while True:
            hi = mx + off
            if _balance(u, wrow, i, hi, kind, mod, p0, p1, eps, tab_t, tab_y) <= 0.0:
                break
            off *= 2.0
            k += 1
            if k > MAX_DOUBLINGS:
                return np.nan
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _balance(u, wrow, i, mid, kind, mod, p0, p1, eps, tab_t, tab_y) >= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@njit(cache=True)
def gauss_seidel_sweep(u, w, interior, kind, mod, p0, p1, eps, tab_t, tab_y, tol):
    """One in-place ascending-order sweep; returns the sup-norm change."""
    change = 0.0
    for ii in range(interior.size):
        i = interior[ii]
        t = local_root(u, w[i], i, kind, mod, p0, p1, eps, tab_t, tab_y, tol)
        if np.isnan(t):
            return np.nan
        c = abs(t - u[i])
        u[i] = t
        if c > change:
            change = c
    return change


@njit(cache=True)
def jacobi_sweep(u, w, interior, kind, mod, p0, p1, eps, tab_t, tab_y, tol):
    """One sweep against a frozen snapshot; returns the sup-norm change."""
    snap = u.copy()
    change = 0.0
    for ii in range(interior.size):
        i = interior[ii]
        t = local_root(snap, w[i], i, kind, mod, p0, p1, eps, tab_t, tab_y, tol)
        if np.isnan(t):
            return np.nan
        c = abs(t - snap[i])
        u[i] = t
        if c > change:
            change = c
    return change
