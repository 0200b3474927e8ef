"""Command-line entry point.

Commands::

    qvi reproduce <example> <dir>    # 5.1 | 5.2 | 5.3 | all
    qvi solve <config>               # run a solver from an INI config
    qvi check <suite> [--seed N]     # geometry | stepsize | dynamics | all

Exit codes: 0 success (Tolerance stop), 1 runtime failure (I/O, divergence),
2 usage or validation error, 3 MaxIter stop.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .checks import run_suite
from .config import RunConfig, build_configured_problem, parse_config
from .errors import ConfigError
from .geometry import NEGATIVE_ENTROPY, SQUARED_NORM
from .harness import (
    reproduce_all,
    reproduce_example_5_1,
    reproduce_example_5_2,
    reproduce_example_5_3,
    write_trace_csv,
)
from .problems import natural_residual
from .solvers import (
    Alg1Config,
    EtaSpec,
    StopReason,
    solve_alg1,
    solve_graal_baseline,
    solve_relaxed_fbf,
)

__all__ = ["main"]

_EXAMPLES = {
    "5.1": reproduce_example_5_1,
    "5.2": reproduce_example_5_2,
    "5.3": reproduce_example_5_3,
    "all": reproduce_all,
}

_STOP_EXIT = {StopReason.TOLERANCE: 0, StopReason.MAX_ITER: 3, StopReason.DIVERGED: 1}


def _cmd_reproduce(args) -> int:
    if args.example not in _EXAMPLES:
        print(
            f"unknown example {args.example!r}: valid examples are 5.1, 5.2, 5.3, all",
            file=sys.stderr,
        )
        return 2
    try:
        written = _EXAMPLES[args.example](Path(args.output_dir))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


def _run_from_config(cfg: RunConfig):
    problem = build_configured_problem(cfg)
    geom = NEGATIVE_ENTROPY if cfg.geometry == "entropy" else SQUARED_NORM
    x0 = problem.default_start
    if cfg.solver_name == "alg1":
        eta = EtaSpec.power_law(cfg.eta_c, cfg.eta_p) if cfg.eta_c > 0.0 else EtaSpec.zero()
        solver_cfg = Alg1Config(
            lambda1=cfg.lambda1,
            mu=cfg.mu,
            gamma=cfg.gamma,
            psi=cfg.psi,
            eta=eta,
            tol=cfg.tol,
            max_iter=cfg.max_iter,
            geometry=geom,
        )
        trace = solve_alg1(problem, solver_cfg, x0, x0)
    elif cfg.solver_name == "relaxed_fbf":
        trace = solve_relaxed_fbf(
            problem, cfg.lambda1, lambda k: cfg.gamma, x0, tol=cfg.tol, max_iter=cfg.max_iter
        )
    else:
        trace = solve_graal_baseline(
            problem, cfg.lambda1, cfg.psi, x0, tol=cfg.tol, max_iter=cfg.max_iter
        )
    return problem, geom, trace


def _cmd_solve(args) -> int:
    try:
        cfg = parse_config(Path(args.config))
        problem, geom, trace = _run_from_config(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    outdir = Path(cfg.output_dir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        write_trace_csv(outdir / "trace.csv", trace)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if trace.stop_reason is StopReason.DIVERGED or not np.all(np.isfinite(trace.final_x)):
        residual = float("nan")
    else:
        lam = float(trace.lams[-1]) if len(trace) else cfg.lambda1
        residual = natural_residual(problem, geom, trace.final_x, lam)
    print(
        f"{trace.stop_reason.value} iterations={trace.iterations} "
        f"residual={residual:.6g} seed={cfg.seed}"
    )
    return _STOP_EXIT[trace.stop_reason]


def _cmd_check(args) -> int:
    results = run_suite(args.suite, seed=args.seed)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        detail = f" ({r.detail})" if r.detail else ""
        print(f"{status} {r.name}{detail}")
        ok &= r.passed
    print(f"{sum(r.passed for r in results)}/{len(results)} properties passed, seed={args.seed}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qvi",
        description="Solvers and diagnostics for quasimonotone variational inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rep = sub.add_parser("reproduce", help="run a bundled experiment and write CSV/SVG outputs")
    p_rep.add_argument("example", help="one of: 5.1, 5.2, 5.3, all")
    p_rep.add_argument("output_dir", help="directory for the emitted files")
    p_rep.set_defaults(func=_cmd_reproduce)

    p_solve = sub.add_parser("solve", help="solve a problem described by a config file")
    p_solve.add_argument("config", help="path to an INI-style run configuration")
    p_solve.set_defaults(func=_cmd_solve)

    p_check = sub.add_parser("check", help="run a property suite")
    p_check.add_argument("suite", choices=["geometry", "stepsize", "dynamics", "all"])
    p_check.add_argument("--seed", type=int, default=0)
    p_check.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
