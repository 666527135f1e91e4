"""Flat-file formats: point-set JSON, solution CSV/JSON, trace and table CSV.

CSV cells use '.' decimals, 17 significant digits and '\\n' line endings so
files are bit-stable across platforms.  JSON carries floats through Python's
repr, which round-trips float64 exactly; the JSON solution format is the
lossless one and is what load_solution prefers.
"""
from __future__ import annotations

import csv
import json
from dataclasses import asdict
from typing import List, Optional, Tuple, Union

import numpy as np

from .errors import ConfigurationError
from .geometry import BoundaryData, PointSet
from .obstacle import ObstacleResult
from .operator import ScalarField, residual
from .solver import SolveReport
from .sources import MonotoneSource

__all__ = [
    "save_pointset",
    "load_pointset",
    "export_solution",
    "load_solution",
    "write_trace",
    "write_barrier_table",
]


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def save_pointset(ps: PointSet, path: str, g: Optional[BoundaryData] = None) -> None:
    doc = {
        "dim": ps.dim,
        "alpha": ps.alpha,
        "points": ps.points.tolist(),
        "boundary": ps.boundary_idx.tolist(),
    }
    if g is not None:
        doc["g"] = g.values.tolist()
        doc["beta"] = g.beta
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_pointset(path: str) -> Tuple[PointSet, Optional[np.ndarray], Optional[float]]:
    """Read a point-set file; returns (ps, boundary values or None, beta or None)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"{path}: not valid JSON ({e})") from e
    for key in ("dim", "alpha", "points", "boundary"):
        if key not in doc:
            raise ConfigurationError(f"{path}: missing key {key!r}")
    pts = np.asarray(doc["points"], dtype=float)
    if pts.ndim != 2 or pts.shape[1] != int(doc["dim"]):
        raise ConfigurationError(f"{path}: points do not match dim={doc['dim']}")
    ps = PointSet(pts, np.asarray(doc["boundary"], dtype=np.int64), float(doc["alpha"]))
    gvals = None
    if "g" in doc and doc["g"] is not None:
        gvals = np.asarray(doc["g"], dtype=float)
        if gvals.shape != (ps.boundary_idx.size,):
            raise ConfigurationError(f"{path}: g must align with the boundary list")
    beta = float(doc["beta"]) if "beta" in doc and doc["beta"] is not None else None
    return ps, gvals, beta


def _coincidence_mask(ps: PointSet, res: Optional[ObstacleResult]) -> Optional[np.ndarray]:
    if res is None:
        return None
    mask = np.zeros(ps.n, dtype=bool)
    mask[res.coincidence] = True
    return mask


def export_solution(
    u: ScalarField,
    report: Union[SolveReport, ObstacleResult, None],
    path: str,
    format: str = "csv",
    source: Optional[MonotoneSource] = None,
) -> None:
    """Write a solved field with one row/entry per point.

    CSV columns: index, x0..x{d-1}, u, residual, role, and a coincidence
    column when the report is an obstacle result.  The residual column is
    filled for interior points when ``source`` is given, else left empty.
    JSON embeds the geometry and report and round-trips exactly.
    """
    ps = u.ps
    obst = report if isinstance(report, ObstacleResult) else None
    rep = obst.report if obst is not None else report
    coin = _coincidence_mask(ps, obst)
    interior = set(ps.interior_idx.tolist())

    if format == "csv":
        resid = {}
        if source is not None:
            for i in ps.interior_idx:
                resid[int(i)] = residual(u, source, int(i))
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            head = ["index"] + [f"x{k}" for k in range(ps.dim)] + ["u", "residual", "role"]
            if coin is not None:
                head.append("coincidence")
            w.writerow(head)
            for i in range(ps.n):
                row = [str(i)]
                row += [_fmt(c) for c in ps.points[i]]
                row.append(_fmt(u.values[i]))
                row.append(_fmt(resid[i]) if i in resid else "")
                row.append("interior" if i in interior else "boundary")
                if coin is not None:
                    row.append("true" if coin[i] else "false")
                w.writerow(row)
    elif format == "json":
        doc = {
            "dim": ps.dim,
            "alpha": ps.alpha,
            "points": ps.points.tolist(),
            "boundary": ps.boundary_idx.tolist(),
            "u": u.values.tolist(),
        }
        if rep is not None:
            doc["report"] = asdict(rep)
        if obst is not None:
            doc["coincidence"] = [int(i) for i in obst.coincidence]
            doc["eps_trace"] = [[e, c] for e, c in obst.eps_trace]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    else:
        raise ConfigurationError(f"format must be 'csv' or 'json', got {format!r}")


def load_solution(path: str, alpha: Optional[float] = None) -> Tuple[ScalarField, dict]:
    """Read a solution written by export_solution.

    JSON files are self-contained.  CSV files do not carry alpha, so it must
    be supplied.  Returns (field, metadata dict).
    """
    if path.endswith(".json"):
        with open(path, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as e:
                raise ConfigurationError(f"{path}: not valid JSON ({e})") from e
        pts = np.asarray(doc["points"], dtype=float)
        ps = PointSet(pts, np.asarray(doc["boundary"], dtype=np.int64), float(doc["alpha"]))
        u = ScalarField(ps, np.asarray(doc["u"], dtype=float))
        meta = {k: doc[k] for k in ("report", "coincidence", "eps_trace") if k in doc}
        return u, meta

    if alpha is None:
        raise ConfigurationError(f"{path}: CSV solutions need an explicit alpha")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ConfigurationError(f"{path}: empty file")
    head = rows[0]
    try:
        ncoord = sum(1 for h in head if h.startswith("x") and h[1:].isdigit())
        iu = head.index("u")
        irole = head.index("role")
    except ValueError as e:
        raise ConfigurationError(f"{path}: missing solution columns ({e})") from e
    pts, vals, bidx = [], [], []
    for r in rows[1:]:
        if not r:
            continue
        pts.append([float(c) for c in r[1:1 + ncoord]])
        vals.append(float(r[iu]))
        if r[irole] == "boundary":
            bidx.append(len(pts) - 1)
    ps = PointSet(np.asarray(pts), np.asarray(bidx, dtype=np.int64), alpha)
    return ScalarField(ps, np.asarray(vals)), {}


def write_trace(path: str, result: ObstacleResult) -> None:
    """Continuation trace: step, epsilon, sup_change, sweeps, residual."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "epsilon", "sup_change", "sweeps", "residual"])
        for k, ((eps, change), rep) in enumerate(zip(result.eps_trace, result.step_reports)):
            w.writerow([str(k), _fmt(eps), _fmt(change),
                        str(rep.sweeps_used), _fmt(rep.final_residual)])


def write_barrier_table(path: Optional[str], rows: List[Tuple[float, ...]]):
    """Barrier constants table: alpha, beta, r0, r_star, psi_ratio, p_residual.

    With path=None, returns the CSV text instead of writing a file.
    """
    lines = ["alpha,beta,r0,r_star,psi_ratio,p_residual"]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        return text
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return None
