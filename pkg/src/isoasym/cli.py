"""Command-line front end: shape evaluation, family sweeps, variational
solves, root finding, curvature residuals, and the verification suite.

Exit codes: 0 success, 1 validation/usage error, 2 verification failure.
Randomized commands take their seed from a mandatory --seed flag; identical
arguments produce byte-identical output.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import families as fam
from . import functionals as fn
from . import geometry as geo
from . import optimality as opt
from . import variational as var
from . import verify
from .svgplot import line_plot_svg

FMT = ".12g"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, on stderr
        print(f"error: {message}", file=sys.stderr)
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _fmt(x: float) -> str:
    return format(x, FMT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="iso", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    p_shape = sub.add_parser("shape", help="shape file operations")
    shape_sub = p_shape.add_subparsers(dest="shape_command", required=True)
    p_eval = shape_sub.add_parser("eval", help="print the functionals report of a shape file")
    p_eval.add_argument("file")
    p_eval.add_argument("--grid-step", type=float, default=None,
                        help="coarse-grid step for the asymmetry search (default diameter/50)")

    p_fam = sub.add_parser("family", help="explicit shape families")
    fam_sub = p_fam.add_subparsers(dest="family_command", required=True)
    p_scan = fam_sub.add_parser("scan", help="sweep a family parameter, emit CSV")
    p_scan.add_argument("family", choices=["stadium", "counterexample"])
    p_scan.add_argument("--lo", type=float, required=True)
    p_scan.add_argument("--hi", type=float, required=True)
    p_scan.add_argument("--steps", type=int, required=True)
    p_scan.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_scan.add_argument("--svg", default=None, help="also plot ratio vs parameter")
    p_db = fam_sub.add_parser("dumbbell", help="report the dumbbell's record")
    p_db.add_argument("--shape-out", default=None, help="also write the shape JSON")

    p_opepl = sub.add_parser("opepl", help="linearized minimization solvers")
    opepl_sub = p_opepl.add_subparsers(dest="opepl_command", required=True)
    p_solve = opepl_sub.add_parser("solve", help="run the minimizers")
    p_solve.add_argument("--method", choices=["fourier", "fixedpoint", "both"], default="both")
    p_solve.add_argument("--harmonics", type=int, default=256)
    p_solve.add_argument("--grid", type=int, default=None,
                         help="grid size (default 8192 fourier / 4096 fixedpoint)")
    p_solve.add_argument("--restarts", type=int, default=32)
    p_solve.add_argument("--seed", type=int, required=True)
    p_solve.add_argument("--out", default=None, help="CSV of the minimizer profile samples")

    p_bound = sub.add_parser("bound", help="analytic lower bounds")
    bound_sub = p_bound.add_subparsers(dest="bound_command", required=True)
    bound_sub.add_parser("m-lower", help="barrier-based lower bound for the minimum")

    p_stad = sub.add_parser("stadium", help="stadium family machinery")
    stad_sub = p_stad.add_subparsers(dest="stadium_command", required=True)
    stad_sub.add_parser("roots", help="roots of the two optimality equations")

    p_opt = sub.add_parser("optimality", help="curvature first-order condition")
    opt_sub = p_opt.add_subparsers(dest="optimality_command", required=True)
    p_resid = opt_sub.add_parser("residual", help="curvature-condition residuals of a shape file")
    p_resid.add_argument("file")
    p_resid.add_argument("--out", default=None, help="CSV path (default stdout)")

    p_verify = sub.add_parser("verify", help="invariant suites")
    verify_sub = p_verify.add_subparsers(dest="verify_command", required=True)
    p_all = verify_sub.add_parser("all", help="run every invariant check")
    p_all.add_argument("--seed", type=int, required=True)
    p_all.add_argument("--quick", action="store_true", help="smaller corpora")

    return p


def _write_lines(lines, path):
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_shape_eval(args) -> int:
    shape = geo.load_shape(args.file)
    rep = fn.functionals_report(shape, grid_step=args.grid_step)
    _write_lines([rep.csv_header(), rep.to_csv_row()], None)
    return 0


def _cmd_family_scan(args) -> int:
    rows = fam.scan(args.family, args.lo, args.hi, args.steps)
    lines = [fam.ScanRecord.csv_header()] + [r.to_csv_row() for r in rows]
    _write_lines(lines, args.out)
    if args.svg:
        line_plot_svg(
            args.svg,
            [r.parameter for r in rows],
            [r.ratio for r in rows],
            title=f"{args.family} sweep",
            xlabel="parameter",
            ylabel="deficit / asymmetry^2",
        )
    return 0


def _cmd_family_dumbbell(args) -> int:
    rec = fam.dumbbell_report()
    _write_lines([fam.ScanRecord.csv_header(), rec.to_csv_row()], None)
    if args.shape_out:
        geo.save_shape(fam.dumbbell_shape(), args.shape_out)
    return 0


def _cmd_opepl_solve(args) -> int:
    lines = []
    sols = []
    if args.method in ("fourier", "both"):
        sols.append(var.opepl_solve_fourier(
            n_harmonics=args.harmonics,
            grid_size=args.grid or 8192,
            restarts=args.restarts,
            seed=args.seed,
        ))
    if args.method in ("fixedpoint", "both"):
        sols.append(var.opepl_solve_fixedpoint(grid_size=args.grid or 4096))
    for sol in sols:
        lines.append(
            f"method={sol.method} m={_fmt(sol.m)} converged={sol.converged} "
            f"identity_gap={_fmt(var.norm_identity_gap(sol))} "
            f"residuals={'/'.join(_fmt(r) for r in sol.residuals)}"
        )
    if len(sols) == 2:
        lines.append(f"difference |m_fourier - m_fixedpoint| = {_fmt(abs(sols[0].m - sols[1].m))}")
    _write_lines(lines, None)
    if args.out:
        sol = sols[0]
        th = geo.TWO_PI * np.arange(sol.grid_size) / sol.grid_size
        rows = ["theta,u0"] + [f"{_fmt(t)},{_fmt(u)}" for t, u in zip(th, sol.u0)]
        _write_lines(rows, args.out)
    return 0


def _cmd_bound_m_lower(args) -> int:
    inner = var.barrier_inner_integral()
    bound = 1.0 / (8.0 * inner)
    _write_lines(
        [
            f"inner_integral={_fmt(inner)}",
            f"m_lower={_fmt(bound)}",
            f"quarter_pi_m_lower={_fmt(math.pi / 4.0 * bound)}",
        ],
        None,
    )
    return 0


def _cmd_stadium_roots(args) -> int:
    r1, r2 = opt.eqop1_root(), opt.eqop2_root()
    rec = fam.stadium_profile(r1)
    _write_lines(
        [
            f"ratio_critical_root={_fmt(r1)}",
            f"curvature_condition_root={_fmt(r2)}",
            f"difference={_fmt(abs(r1 - r2))}",
            f"ratio_at_root={_fmt(rec.ratio)}",
        ],
        None,
    )
    return 0


def _cmd_optimality_residual(args) -> int:
    shape = geo.load_shape(args.file)
    rep = opt.optimality_residual(shape)
    summary = (
        f"mu1={_fmt(rep.mu1)} mu2={_fmt(rep.mu2)} "
        f"max_abs_residual={_fmt(rep.max_abs_residual)} skipped={rep.n_skipped}"
    )
    _write_lines([summary], None)
    _write_lines(list(rep.to_csv_rows()), args.out)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "shape":
            return _cmd_shape_eval(args)
        if args.command == "family":
            if args.family_command == "scan":
                return _cmd_family_scan(args)
            return _cmd_family_dumbbell(args)
        if args.command == "opepl":
            return _cmd_opepl_solve(args)
        if args.command == "bound":
            return _cmd_bound_m_lower(args)
        if args.command == "stadium":
            return _cmd_stadium_roots(args)
        if args.command == "optimality":
            return _cmd_optimality_residual(args)
        if args.command == "verify":
            return verify.run_all(args.seed, quick=args.quick)
    except BrokenPipeError:
        try:
            sys.stdout.close()
        except Exception:
            pass
        return 0
    except (geo.ShapeError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    raise SystemExit(main())
