"""Command-line front end.

Subcommands: grid, solve, solve-obstacle, homogeneous, barrier-table,
holder, verify.  Exit codes: 0 success, 2 convergence failure, 3 invariant
violation, 4 input error (including bad flags, which argparse would
otherwise report as 2).
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

import numpy as np

from .analysis import holder_report
from .barriers import p_of_r, r_star
from .errors import ConfigurationError, ConvergenceError
from .geometry import BoundaryData, PointSet, build_grid
from .invariants import run_invariant_suite
from .io import (
    export_solution,
    load_pointset,
    load_solution,
    save_pointset,
    write_barrier_table,
    write_trace,
)
from .obstacle import ObstacleConfig, solve_obstacle
from .solver import SolverConfig, solve_dirichlet, solve_homogeneous_closed_form
from .sources import MonotoneSource, parse_source


class _Parser(argparse.ArgumentParser):
    # bad usage is an input error; the default argparse exit code 2 is
    # reserved here for convergence failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(4, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> List[float]:
    try:
        return [float(p) for p in text.split(",") if p != ""]
    except ValueError as e:
        raise ConfigurationError(f"expected comma-separated reals, got {text!r}") from e


def _opt_float(text: Optional[str], flag: str) -> Optional[float]:
    if text is None:
        return None
    try:
        return float(text)
    except ValueError as e:
        raise ConfigurationError(f"{flag} expects a real number, got {text!r}") from e


def _parse_counts(text: str) -> List[int]:
    try:
        return [int(p) for p in text.split(",") if p != ""]
    except ValueError as e:
        raise ConfigurationError(f"expected comma-separated integers, got {text!r}") from e


def _parse_bounds(text: str, dim: int):
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition(":")
        if not sep:
            raise ConfigurationError(f"bounds need lo:hi per axis, got {part!r}")
        out.append((float(lo), float(hi)))
    if len(out) != dim:
        raise ConfigurationError(f"bounds cover {len(out)} axes, counts give {dim}")
    return out


def _eval_g(spec: str, pts: np.ndarray) -> np.ndarray:
    kind, _, rest = spec.partition(":")
    if kind == "const":
        return np.full(pts.shape[0], float(rest))
    if kind == "coord":
        k = int(rest)
        if not 0 <= k < pts.shape[1]:
            raise ConfigurationError(f"coord:{k} out of range for dim {pts.shape[1]}")
        return pts[:, k].copy()
    if kind == "radial":
        p = float(rest) if rest else 1.0
        return np.sqrt((pts ** 2).sum(axis=1)) ** p
    raise ConfigurationError(f"boundary value spec must be const:C, coord:K or radial:P, got {spec!r}")


def _solver_config(args, start="lower_envelope") -> SolverConfig:
    return SolverConfig(
        scheme=args.scheme.replace("-", "_"),
        sweep_tol=args.tol,
        residual_tol=args.residual_tol,
        max_sweeps=args.max_sweeps,
        start=start,
    )


def _load_problem(args):
    ps, gvals, beta_file = load_pointset(args.input)
    alpha = _opt_float(args.alpha, "--alpha")
    if alpha is not None and alpha != ps.alpha:
        ps = PointSet(ps.points, ps.boundary_idx, alpha)
    if gvals is None:
        raise ConfigurationError(
            f"{args.input}: no boundary values; regenerate with grid --g or add a 'g' array"
        )
    beta = _opt_float(args.beta, "--beta")
    if beta is None:
        beta = beta_file if beta_file is not None else ps.alpha / 2
    return ps, BoundaryData(ps, gvals, beta)


def _out_format(args, default_name: str):
    out = args.out or default_name
    fmt = args.format or ("json" if out.endswith(".json") else "csv")
    return out, fmt


def cmd_grid(args) -> int:
    alpha = _opt_float(args.alpha, "--alpha")
    if alpha is None:
        alpha = 0.5
    counts = _parse_counts(args.counts)
    bounds = _parse_bounds(args.bounds, len(counts)) if args.bounds else [(0.0, 1.0)] * len(counts)
    ps = build_grid(counts, bounds, alpha)
    gvals = _eval_g(args.g, ps.points[ps.boundary_idx])
    beta = _opt_float(args.beta, "--beta")
    if beta is None:
        beta = alpha / 2
    g = BoundaryData(ps, gvals, beta)
    out = args.out or "pointset.json"
    save_pointset(ps, out, g)
    print(f"wrote {out}: {ps.n} points ({ps.boundary_idx.size} boundary), "
          f"alpha={ps.alpha}, beta={beta}")
    return 0


def cmd_solve(args) -> int:
    ps, g = _load_problem(args)
    f = parse_source(args.source)
    cfg = _solver_config(args, start=args.start.replace("-", "_"))
    u, rep = solve_dirichlet(ps, g, f, cfg)
    out, fmt = _out_format(args, "solution.csv")
    export_solution(u, rep, out, fmt, source=f)
    print(f"wrote {out}: {rep.sweeps_used} sweeps, change {rep.final_change:.3e}, "
          f"residual {rep.final_residual:.3e}, {rep.wall_time:.2f}s")
    if rep.bracket_gap is not None:
        print(f"envelope-start gap {rep.bracket_gap:.3e}")
    return 0


def cmd_homogeneous(args) -> int:
    ps, g = _load_problem(args)
    u = solve_homogeneous_closed_form(ps, g)
    out, fmt = _out_format(args, "solution.csv")
    export_solution(u, None, out, fmt, source=MonotoneSource.constant(0.0))
    print(f"wrote {out}: closed-form homogeneous solution on {ps.n} points")
    return 0


def cmd_solve_obstacle(args) -> int:
    ps, g = _load_problem(args)
    f = parse_source(args.source)
    cfg = ObstacleConfig(
        eps0=args.eps0,
        eps_factor=args.eps_factor,
        eps_steps=args.eps_steps,
        coincidence_tol=args.coincidence_tol,
        inner=_solver_config(args),
    )
    result = solve_obstacle(ps, g, f, cfg)
    out, fmt = _out_format(args, "solution.csv")
    export_solution(result.u, result, out, fmt, source=f)
    if args.trace:
        write_trace(args.trace, result)
    steps = len(result.eps_trace)
    print(f"wrote {out}: {steps} continuation steps, {result.report.sweeps_used} sweeps, "
          f"{result.coincidence.size} coincidence points")
    return 0


def cmd_barrier_table(args) -> int:
    if args.alpha is None:
        raise ConfigurationError("barrier-table needs --alpha")
    if args.beta is None:
        raise ConfigurationError("barrier-table needs --beta")
    rows = []
    for a in _floats(args.alpha):
        for b in _floats(args.beta):
            rs, ratio = r_star(a, b)
            r0 = (1.0 - b) / (a - b)
            rows.append((a, b, r0, rs, ratio, p_of_r(rs, a, b)))
    text = write_barrier_table(args.out, rows)
    if text is not None:
        sys.stdout.write(text)
    else:
        print(f"wrote {args.out}: {len(rows)} rows")
    return 0


def cmd_holder(args) -> int:
    beta = _opt_float(args.beta, "--beta")
    if beta is None:
        raise ConfigurationError("holder needs --beta")
    u, _meta = load_solution(args.input, alpha=_opt_float(args.alpha, "--alpha"))
    rep = holder_report(u, beta, splits=args.splits)
    print(f"beta {rep.beta}")
    print(f"global_seminorm {rep.global_seminorm:.12g}")
    for name, s in rep.local_seminorms:
        print(f"{name} {s:.12g}")
    if args.out:
        fmt = args.format or ("json" if args.out.endswith(".json") else "csv")
        if fmt == "json":
            doc = {
                "beta": rep.beta,
                "global_seminorm": rep.global_seminorm,
                "local_seminorms": rep.local_seminorms,
                "bound": rep.bound,
                "satisfied": rep.satisfied,
            }
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, indent=1)
                fh.write("\n")
        else:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write("region,seminorm\n")
                fh.write(f"global,{rep.global_seminorm:.17g}\n")
                for name, s in rep.local_seminorms:
                    fh.write(f"{name},{s:.17g}\n")
    return 0


def cmd_verify(args) -> int:
    rep = run_invariant_suite(args.seed, args.trials)
    for fam in rep.families:
        print(f"{fam.name}: {fam.passes} passed, {fam.failures} failed, "
              f"{fam.skips} skipped, worst margin {fam.worst_margin:.3e}")
    if not rep.ok:
        replay = args.out or "invariant_failure.json"
        with open(replay, "w", encoding="utf-8") as fh:
            json.dump(rep.to_dict(), fh, indent=1)
            fh.write("\n")
        print(f"failure details written to {replay}", file=sys.stderr)
        return 3
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(rep.to_dict(), fh, indent=1)
            fh.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", default=None,
                        help="exponent in (0,1); overrides the input file; "
                             "barrier-table accepts a comma list")
    common.add_argument("--beta", default=None,
                        help="boundary/holder exponent in (0, alpha); "
                             "barrier-table accepts a comma list")
    common.add_argument("--tol", type=float, default=1e-10,
                        help="sweep sup-change tolerance")
    common.add_argument("--residual-tol", type=float, default=1e-8)
    common.add_argument("--max-sweeps", type=int, default=10000)
    common.add_argument("--scheme", choices=["gauss-seidel", "jacobi"],
                        default="gauss-seidel")
    common.add_argument("--out", default=None, help="output path")
    common.add_argument("--format", choices=["csv", "json"], default=None,
                        help="output format (default: from extension)")

    p = _Parser(prog="inflap",
                description="Dirichlet and obstacle problems for the "
                            "Holder infinity Laplacian on finite point sets")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("grid", parents=[common], help="emit a rectangular grid point-set file")
    sp.add_argument("--counts", required=True, help="points per axis, e.g. 51 or 21,21")
    sp.add_argument("--bounds", default=None, help="lo:hi per axis, e.g. 0:1,0:1")
    sp.add_argument("--g", default="const:0",
                    help="boundary values: const:C, coord:K or radial:P")
    sp.set_defaults(func=cmd_grid)

    sp = sub.add_parser("solve", parents=[common], help="solve the Dirichlet problem")
    sp.add_argument("--input", required=True)
    sp.add_argument("--source", required=True, help="const:C, power:A,P or table:PATH")
    sp.add_argument("--start", choices=["lower-envelope", "upper-envelope", "both"],
                    default="lower-envelope")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("solve-obstacle", parents=[common],
                        help="solve the zero-obstacle problem")
    sp.add_argument("--input", required=True)
    sp.add_argument("--source", required=True)
    sp.add_argument("--eps0", type=float, default=1e-1)
    sp.add_argument("--eps-factor", type=float, default=0.5)
    sp.add_argument("--eps-steps", type=int, default=20)
    sp.add_argument("--coincidence-tol", type=float, default=1e-8)
    sp.add_argument("--trace", default=None, help="write the continuation trace CSV here")
    sp.set_defaults(func=cmd_solve_obstacle)

    sp = sub.add_parser("homogeneous", parents=[common],
                        help="closed-form solution for f = 0")
    sp.add_argument("--input", required=True)
    sp.set_defaults(func=cmd_homogeneous)

    sp = sub.add_parser("barrier-table", parents=[common],
                        help="cone comparison constants for alpha/beta lists")
    sp.set_defaults(func=cmd_barrier_table)

    sp = sub.add_parser("holder", parents=[common],
                        help="measure Holder seminorms of a solution file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--splits", type=int, default=2,
                    help="sub-boxes per axis for local seminorms")
    sp.set_defaults(func=cmd_holder)

    sp = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=1000)
    sp.set_defaults(func=cmd_verify)

    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else int(e.code)
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return 4
    try:
        return args.func(args)
    except ConvergenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
