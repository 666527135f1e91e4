"""Validated non-decreasing continuous source terms f.

A MonotoneSource is one of three base families (constant, power, tabulated
piecewise-linear) optionally wrapped by a modification used by the obstacle
path (zero extension to the negative axis, or the linear ramp on [0, eps]).
Monotonicity is checked at construction: constants always pass, powers need a
non-negative coefficient and positive exponent, tables need non-decreasing
ordinates.  Evaluation accepts scalars or numpy arrays.
"""
from __future__ import annotations

import numpy as np

from .errors import ConfigurationError

__all__ = ["MonotoneSource", "parse_source"]

_KIND_CODES = {"const": 0, "power": 1, "table": 2}
_MOD_CODES = {"none": 0, "zero_extend": 1, "ramp": 2}
_EMPTY = np.empty(0, dtype=np.float64)


class MonotoneSource:
    """A continuous non-decreasing scalar function f(t).

    Construct through the classmethods ``constant``, ``power``, ``table`` or
    the grammar parser :func:`parse_source`.  ``zero_extended`` and ``ramped``
    return modified copies and are what the obstacle solver uses.
    """

    def __init__(self, kind, *, c=0.0, a=0.0, p=1.0, tab_t=None, tab_y=None,
                 mod="none", eps=0.0, label=None):
        if kind not in _KIND_CODES:
            raise ConfigurationError(f"unknown source kind {kind!r}")
        if mod not in _MOD_CODES:
            raise ConfigurationError(f"unknown source modification {mod!r}")
        self.kind = kind
        self.mod = mod
        self.c = float(c)
        self.a = float(a)
        self.p = float(p)
        self.eps = float(eps)
        self.tab_t = _EMPTY if tab_t is None else np.ascontiguousarray(tab_t, dtype=np.float64)
        self.tab_y = _EMPTY if tab_y is None else np.ascontiguousarray(tab_y, dtype=np.float64)
        self._label = label
        self._validate()

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c: float) -> "MonotoneSource":
        return cls("const", c=c, label=f"const:{c:g}")

    @classmethod
    def power(cls, a: float, p: float) -> "MonotoneSource":
        """a * max(t, 0)^p; needs a >= 0 and p > 0 to be non-decreasing."""
        return cls("power", a=a, p=p, label=f"power:{a:g},{p:g}")

    @classmethod
    def table(cls, ts, ys) -> "MonotoneSource":
        """Piecewise-linear through (ts, ys), constant beyond the endpoints."""
        return cls("table", tab_t=ts, tab_y=ys)

    def zero_extended(self) -> "MonotoneSource":
        """Replace f on the negative axis by 0; requires f(0) = 0."""
        if self.mod != "none":
            raise ConfigurationError("source is already modified")
        if self(0.0) != 0.0:
            raise ConfigurationError("zero extension requires f(0) = 0")
        return self._with(mod="zero_extend")

    def ramped(self, eps: float) -> "MonotoneSource":
        """0 on (-inf, 0], the linear ramp (t/eps)*f(eps) on (0, eps), f beyond."""
        if self.mod != "none":
            raise ConfigurationError("source is already modified")
        if eps <= 0.0:
            raise ConfigurationError("ramp eps must be positive")
        if self(0.0) < 0.0:
            raise ConfigurationError("ramp requires f(0) >= 0")
        return self._with(mod="ramp", eps=eps)

    def _with(self, **kw) -> "MonotoneSource":
        args = dict(kind=self.kind, c=self.c, a=self.a, p=self.p,
                    tab_t=self.tab_t, tab_y=self.tab_y, mod=self.mod,
                    eps=self.eps, label=self._label)
        args.update(kw)
        return MonotoneSource(args.pop("kind"), **args)

    # -- validation --------------------------------------------------------

    def _validate(self):
        if self.kind == "const":
            if not np.isfinite(self.c):
                raise ConfigurationError("constant source must be finite")
        elif self.kind == "power":
            if not (np.isfinite(self.a) and np.isfinite(self.p)):
                raise ConfigurationError("power source parameters must be finite")
            if self.a < 0.0:
                raise ConfigurationError(
                    "power source with negative coefficient is decreasing; unsupported"
                )
            if self.p <= 0.0:
                raise ConfigurationError("power exponent must be positive")
        else:
            t, y = self.tab_t, self.tab_y
            if t.size < 2 or t.shape != y.shape:
                raise ConfigurationError("table needs >= 2 aligned (t, y) rows")
            if not (np.all(np.isfinite(t)) and np.all(np.isfinite(y))):
                raise ConfigurationError("table entries must be finite")
            if np.any(np.diff(t) <= 0.0):
                raise ConfigurationError("table abscissae must be strictly increasing")
            if np.any(np.diff(y) < 0.0):
                raise ConfigurationError(
                    "table ordinates decrease; source must be non-decreasing"
                )
        if self.mod == "ramp" and self.eps <= 0.0:
            raise ConfigurationError("ramp eps must be positive")

    # -- evaluation --------------------------------------------------------

    def _base(self, t):
        if self.kind == "const":
            return np.full_like(t, self.c)
        if self.kind == "power":
            return self.a * np.maximum(t, 0.0) ** self.p
        return np.interp(t, self.tab_t, self.tab_y)

    def __call__(self, t):
        scalar = np.isscalar(t) or getattr(t, "ndim", 0) == 0
        t = np.asarray(t, dtype=np.float64)
        if self.mod == "none":
            out = self._base(t)
        elif self.mod == "zero_extend":
            out = np.where(t <= 0.0, 0.0, self._base(np.maximum(t, 0.0)))
        else:
            ramp = (t / self.eps) * self._base(np.full_like(t, self.eps))
            out = np.where(t <= 0.0, 0.0, np.where(t < self.eps, ramp, self._base(t)))
        return float(out) if scalar else out

    # -- plumbing ----------------------------------------------------------

    def kernel_args(self):
        """Numeric encoding consumed by the njit sweep kernel."""
        return (_KIND_CODES[self.kind], _MOD_CODES[self.mod],
                self.c if self.kind == "const" else self.a,
                self.p, self.eps, self.tab_t, self.tab_y)

    def describe(self) -> str:
        base = self._label or f"table:{self.tab_t.size}pts"
        if self.mod == "zero_extend":
            return f"zero-extended({base})"
        if self.mod == "ramp":
            return f"ramp(eps={self.eps:g}, {base})"
        return base

    def __repr__(self):
        return f"MonotoneSource({self.describe()})"


def parse_source(text: str) -> MonotoneSource:
    """Parse the CLI grammar const:C | power:A,P | table:PATH."""
    head, sep, rest = text.partition(":")
    if not sep:
        raise ConfigurationError(f"malformed source {text!r}; expected kind:args")
    try:
        if head == "const":
            return MonotoneSource.constant(float(rest))
        if head == "power":
            a, p = rest.split(",")
            return MonotoneSource.power(float(a), float(p))
        if head == "table":
            ts, ys = _read_table(rest)
            src = MonotoneSource.table(ts, ys)
            src._label = f"table:{rest}"
            return src
    except ConfigurationError:
        raise
    except (ValueError, OSError) as exc:
        raise ConfigurationError(f"malformed source {text!r}: {exc}") from exc
    raise ConfigurationError(f"unknown source kind {head!r}")


def _read_table(path: str):
    """Two-column CSV of (t, y) rows; a non-numeric first row is a header."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2:
                raise ConfigurationError(f"table row needs 2 columns: {line!r}")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError:
                if rows:
                    raise
                continue  # header line
    if len(rows) < 2:
        raise ConfigurationError(f"table file {path!r} has fewer than 2 data rows")
    arr = np.asarray(rows, dtype=np.float64)
    return arr[:, 0], arr[:, 1]
