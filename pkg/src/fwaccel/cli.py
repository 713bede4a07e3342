"""Command-line entry point.

Subcommands:

* ``gen-instance`` -- write a generated quadratic instance to a .npz file.
* ``solve``        -- run one algorithm on one instance, print a summary.
* ``sweep``        -- run an experiment grid and emit per-cell CSVs.
* ``validate``     -- run the invariant checks, one pass/fail line each.

Exit codes: 0 success, 1 validation/run failure, 2 usage error.
"""

import argparse
import os
import sys

from . import validate as validation
from .harness import (ALGORITHMS, DEFAULT_DELTA_VALUES, DEFAULT_R_VALUES,
                      ExperimentConfig, emit_csv, run_algorithm,
                      run_experiment, write_manifest)
from .objective import generate_instance, load_instance, save_instance

OUT_DIR_ENV = "FWACCEL_OUT_DIR"


def build_parser():
    parser = argparse.ArgumentParser(prog="fwaccel")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-instance", help="generate a quadratic instance file")
    gen.add_argument("--n", type=int, default=200)
    gen.add_argument("--r", type=int, default=10)
    gen.add_argument("--delta", type=float, default=1.0)
    gen.add_argument("--beta", type=float, default=100.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)

    solve = sub.add_parser("solve", help="run one algorithm on one instance")
    solve.add_argument("--algo", choices=ALGORITHMS, default="afista-afw")
    solve.add_argument("--instance", help="instance .npz (generated if omitted)")
    solve.add_argument("--n", type=int, default=200)
    solve.add_argument("--r", type=int, default=10)
    solve.add_argument("--delta", type=float, default=1.0)
    solve.add_argument("--beta", type=float, default=100.0)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--outer-iters", type=int, default=200)
    solve.add_argument("--r-hat", type=int, default=None)

    sweep = sub.add_parser("sweep", help="run an experiment grid, emit CSVs")
    sweep.add_argument("--defaults", action="store_true",
                       help="use the full default grid (overrides --r/--delta/--seeds)")
    sweep.add_argument("--n", type=int, default=200)
    sweep.add_argument("--r", type=int, nargs="+", default=list(DEFAULT_R_VALUES))
    sweep.add_argument("--delta", type=float, nargs="+",
                       default=list(DEFAULT_DELTA_VALUES))
    sweep.add_argument("--beta", type=float, default=100.0)
    sweep.add_argument("--outer-iters", type=int, default=2000)
    sweep.add_argument("--seeds", type=int, nargs="+", default=list(range(10)))
    sweep.add_argument("--algo", nargs="+",
                       default=["afista-afw", "afista-sp-afw", "cgs", "fw"],
                       choices=ALGORITHMS)
    sweep.add_argument("--r-hat", default="equal-to-r")
    sweep.add_argument("--out-dir", default=os.environ.get(OUT_DIR_ENV, "results"))
    sweep.add_argument("--workers", type=int, default=1)

    val = sub.add_parser("validate", help="run the invariant suites")
    val.add_argument("--quiet", action="store_true")
    return parser


def _cmd_gen_instance(args):
    instance = generate_instance(args.n, args.r, args.delta, args.beta, args.seed)
    save_instance(instance, args.out)
    print(f"wrote instance n={args.n} r={args.r} delta={args.delta} "
          f"beta={args.beta} seed={args.seed} to {args.out}")
    return 0


def _cmd_solve(args):
    if args.instance:
        instance = load_instance(args.instance)
    else:
        instance = generate_instance(args.n, args.r, args.delta, args.beta,
                                     args.seed)
    trace = run_algorithm(args.algo, instance, args.outer_iters,
                          r_hat=args.r_hat)
    if trace.aborted:
        print(f"run aborted: {trace.abort_reason}", file=sys.stderr)
        return 1
    last = trace.rows[-1]
    print(f"algorithm={trace.algorithm} n={instance.n} r={instance.r} "
          f"delta={instance.delta} seed={instance.seed}")
    print(f"outer_iters={last.outer_iter} final_error={last.error:.6e}")
    print(f"fo_calls={last.fo} loo_calls={last.loo} "
          f"sparse_proj_calls={last.sparse_proj} loo_equiv={last.loo_equiv}")
    return 0


def _cmd_sweep(args):
    r_hat = args.r_hat
    if r_hat != "equal-to-r":
        r_hat = int(r_hat)
    if args.defaults:
        config = ExperimentConfig(workers=args.workers)
    else:
        config = ExperimentConfig(
            n=args.n, r_values=tuple(args.r), delta_values=tuple(args.delta),
            beta=args.beta, T=args.outer_iters, seeds=tuple(args.seeds),
            algorithms=tuple(args.algo), r_hat=r_hat, workers=args.workers)
    traces = run_experiment(config, log=print)
    paths = emit_csv(traces, args.out_dir)
    write_manifest(config, args.out_dir,
                   extra={"aborted_runs": sum(tr.aborted for tr in traces)})
    print(f"wrote {len(paths)} CSV files to {args.out_dir}")
    return 1 if any(tr.aborted for tr in traces) else 0


def _cmd_validate(args):
    log = None if args.quiet else print
    return 0 if validation.run_all(log=log) else 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "gen-instance": _cmd_gen_instance,
        "solve": _cmd_solve,
        "sweep": _cmd_sweep,
        "validate": _cmd_validate,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
