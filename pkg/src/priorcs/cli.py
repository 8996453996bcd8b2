"""Command-line front end.

Subcommands: gen-matrix, analyze, solve, bounds, fig1, fig2, fig3, fig4,
verify. Exit codes: 0 success, 2 configuration/usage error, 3 assertion
failure (fig3 ratio hook, verify violations), for CI use. The output
directory resolves as --out-dir flag, then the PRIORCS_OUT_DIR environment
variable, then the config value.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import bounds as bounds_mod
from .errors import ConfigError, InvalidInputError, PriorCSError
from .experiments import (
    check_fig3,
    emit_experiment_outputs,
    load_config,
    run_experiment,
    summarize_verify,
)
from .matrices import (
    MATRIX_KINDS,
    format_real,
    generate_matrix,
    isometry_report,
    read_matrix_file,
    write_matrix_file,
)
from .solver import SolveTolerances, read_problem_file, solve_weighted_l1

OUT_DIR_ENV = "PRIORCS_OUT_DIR"

_FIG_KINDS = {
    "fig1": "fig1-coeffs",
    "fig2": "fig2-error-terms",
    "fig3": "fig3-kratio",
    "fig4": "fig4-comparison",
    "verify": "verify-local",
}

THEOREMS = ("local", "cai", "haixiao", "friedlander", "chen", "ge")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="priorcs",
        description="Weighted l1 sparse recovery with prior support: solvers, "
                    "guarantee calculators, and comparison experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-matrix", help="generate a sensing matrix file")
    gen.add_argument("--kind", choices=MATRIX_KINDS, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--in", dest="source", help="matrix file to pass through (explicit kind)")
    gen.add_argument("--out", required=True)

    ana = sub.add_parser("analyze", help="coherence and isometry data for a matrix file")
    ana.add_argument("--matrix", required=True)
    ana.add_argument("--k", type=int, default=None)
    ana.add_argument("--no-exact", action="store_true",
                     help="skip the exhaustive RIC/ROC even when within budget")

    sol = sub.add_parser("solve", help="solve a weighted l1 problem file")
    sol.add_argument("--problem", required=True)
    sol.add_argument("--opt-tol", type=float, default=1e-8)
    sol.add_argument("--feas-tol", type=float, default=1e-9)
    sol.add_argument("--max-iter", type=int, default=200_000)

    bnd = sub.add_parser("bounds", help="evaluate recovery guarantees at one parameter point")
    bnd.add_argument("--theorem", choices=THEOREMS + ("all",), default="all")
    bnd.add_argument("--mu", type=float, required=True)
    bnd.add_argument("--k", type=int, required=True)
    bnd.add_argument("--rho", type=float, default=0.0)
    bnd.add_argument("--alpha", type=float, default=0.0)
    bnd.add_argument("--w", type=float, default=1.0)
    bnd.add_argument("--a", type=float, default=None)
    bnd.add_argument("--b", type=float, default=None)
    bnd.add_argument("--t", type=float, default=None)
    bnd.add_argument("--delta-ak", type=float, default=None)
    bnd.add_argument("--delta-a1k", type=float, default=None)
    bnd.add_argument("--delta-a", type=float, default=None)
    bnd.add_argument("--theta-ab", type=float, default=None)
    bnd.add_argument("--delta-tk", type=float, default=None)

    for name in _FIG_KINDS:
        fig = sub.add_parser(name, help=f"run the {name} experiment")
        fig.add_argument("--config", default=None)
        fig.add_argument("-o", "--override", action="append", default=[],
                         metavar="KEY=VALUE", help="override one config entry")
        fig.add_argument("--out-dir", default=None)
    return parser


def _cmd_gen_matrix(args) -> int:
    entries = None
    if args.source is not None:
        entries = read_matrix_file(args.source).entries
    matrix = generate_matrix(args.kind, args.m, args.n, args.seed, entries=entries)
    write_matrix_file(matrix, args.out)
    print(f"wrote {args.out}")
    print(f"coherence={format_real(matrix.mu)}")
    return 0


def _cmd_analyze(args) -> int:
    matrix = read_matrix_file(args.matrix)
    print(f"m={matrix.m}")
    print(f"n={matrix.n}")
    print(f"coherence={format_real(matrix.mu)}")
    if args.k is not None:
        report = isometry_report(matrix, args.k, exact=not args.no_exact)
        print(f"k={report.k}")
        print(f"delta_coherence_bound={format_real(report.delta_coherence_bound)}")
        if report.delta_exact is not None:
            print(f"delta_exact={format_real(report.delta_exact)}")
        if report.theta_exact is not None:
            print(f"theta_exact={format_real(report.theta_exact)}")
    return 0


def _cmd_solve(args) -> int:
    problem = read_problem_file(args.problem)
    report = solve_weighted_l1(
        problem,
        SolveTolerances(opt_tol=args.opt_tol, feas_tol=args.feas_tol, max_iter=args.max_iter),
    )
    print("x_star=" + ",".join(format_real(v) for v in report.x_star))
    print(f"objective={format_real(report.objective)}")
    print(f"feasibility_residual={format_real(report.feasibility_residual)}")
    print(f"iterations={report.iterations}")
    print(f"converged={'true' if report.converged else 'false'}")
    print(f"opt_residual={format_real(report.opt_residual)}")
    return 0


def _bounds_rows(args):
    p = bounds_mod.GuaranteeParams(
        mu=args.mu, k=args.k, rho=args.rho, alpha=args.alpha, w=args.w,
        a=args.a, b=args.b, t=args.t,
    )
    wanted = THEOREMS if args.theorem == "all" else (args.theorem,)
    for name in wanted:
        if name == "local":
            yield bounds_mod.local_bound(p)
        elif name == "cai":
            yield bounds_mod.cai_bound(p)
        elif name == "haixiao":
            yield bounds_mod.haixiao_bound(p)
        elif name == "friedlander":
            if args.delta_ak is not None and args.delta_a1k is not None:
                yield bounds_mod.friedlander_bound(p, args.delta_ak, args.delta_a1k)
            else:
                yield bounds_mod.friedlander_bound_coherence(p)
        elif name == "chen":
            if args.delta_a is not None and args.theta_ab is not None:
                yield bounds_mod.chen_bound(p, args.delta_a, args.theta_ab)
            else:
                yield bounds_mod.chen_bound_coherence(p)
        elif name == "ge":
            if args.delta_tk is not None:
                yield bounds_mod.ge_bound(p, args.delta_tk)
            else:
                yield bounds_mod.ge_bound_coherence(p)


def _cmd_bounds(args) -> int:
    print("theorem,c0,c1,k_max,valid,reason")
    for res in _bounds_rows(args):
        cells = [
            res.theorem,
            f"{res.c0:.12g}",
            f"{res.c1:.12g}",
            "inf" if math.isinf(res.k_max) else f"{res.k_max:.12g}",
            "true" if res.valid else "false",
            res.reason.replace(",", ";"),
        ]
        print(",".join(cells))
    return 0


def _parse_overrides(pairs) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"override must look like key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _cmd_experiment(name: str, args) -> int:
    kind = _FIG_KINDS[name]
    cfg = load_config(kind, path=args.config, overrides=_parse_overrides(args.override))
    out_dir = args.out_dir or os.environ.get(OUT_DIR_ENV) or cfg.out_dir
    table = run_experiment(cfg)
    written = emit_experiment_outputs(cfg, table, out_dir)
    for path in written:
        print(f"wrote {path}")
    if kind == "fig3-kratio":
        problems = check_fig3(table)
        if problems:
            for msg in problems:
                print(f"assertion failed: {msg}", file=sys.stderr)
            return 3
        print(f"all {len(table.rows)} k-ratios > 1")
    if kind == "verify-local":
        summary = summarize_verify(table)
        data = dict(zip(summary.columns, summary.rows[0]))
        print(
            "trials={trials} converged={converged} nonconverged={nonconverged} "
            "violations={violations}".format(**data)
        )
        if data["violations"] > 0:
            print("assertion failed: local bound violated on converged trials", file=sys.stderr)
            return 3
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    np.seterr(all="ignore")  # invalid regions evaluate to nan/inf by design
    try:
        if args.command == "gen-matrix":
            return _cmd_gen_matrix(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "bounds":
            return _cmd_bounds(args)
        return _cmd_experiment(args.command, args)
    except (ConfigError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PriorCSError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
