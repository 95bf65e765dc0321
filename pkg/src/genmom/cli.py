"""Command-line entry point: ``genmom {run,simulate,sweep,check}``.

Exit status: 0 success, 1 configuration error, 2 divergence, 3 check failure.
"""

import argparse
import sys

from . import harness
from .exceptions import DivergenceError, InvalidArgumentError, InvalidConfigError


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat JSON config file; flags override its values")
    common.add_argument("--method", choices=("gmd_f", "gmd", "gmd_b"))
    common.add_argument("--lambda", dest="lambda_", type=float, metavar="LAMBDA")
    common.add_argument("--c", type=float)
    common.add_argument("--mu", type=float)
    common.add_argument("--mirror")
    common.add_argument("--radius", type=float)
    common.add_argument("--p", type=float, help="exponent of the squared p-norm map")
    common.add_argument("--problem")
    common.add_argument("--dim", type=int)
    common.add_argument("--kappa", type=float)
    common.add_argument("--iters", type=int)
    common.add_argument("--dt", type=float)
    common.add_argument("--tmax", type=float)
    common.add_argument("--dynamics", choices=("hd", "ad", "mod"))
    common.add_argument("--timescale", choices=harness.TIMESCALES)
    common.add_argument("--eta", type=float)
    common.add_argument("--power", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output CSV path (default: stdout)")
    common.add_argument("--diag-ck", dest="diag_ck", action="store_const", const=True,
                        help="track the bounded quantity C_k and its increments")
    common.add_argument("--history-cap", dest="history_cap", type=int)
    common.add_argument("--lambdas", help="comma-separated lambda values for sweep")
    common.add_argument("--workers", type=int)
    common.add_argument("--suite", help="check suites, comma-separated, or 'all'")

    p = argparse.ArgumentParser(prog="genmom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run a discrete method and write its trace")
    sub.add_parser("simulate", parents=[common], help="integrate continuous dynamics")
    sub.add_parser("sweep", parents=[common], help="sweep lambda and fit rates")
    sub.add_parser("check", parents=[common], help="run the invariant check suites")
    return p


def _overrides(args):
    d = {k: v for k, v in vars(args).items() if k not in ("config", "lambda_")}
    d["lambda"] = args.lambda_
    return d


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        cfg = harness.parse_config(args.config, _overrides(args))
    except InvalidConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return harness.EXIT_CONFIG
    try:
        if cfg.command == "run":
            result = harness.run_experiment(cfg)
            harness.emit_trace(result.trace, cfg.out)
        elif cfg.command == "simulate":
            traj = harness.simulate_experiment(cfg)
            harness.emit_trajectory(traj, cfg.out)
        elif cfg.command == "sweep":
            harness.sweep_lambda(cfg, out=cfg.out or "-")
        else:
            results = harness.run_checks(cfg.suite)
            failed = sum(not r.passed for r in results)
            print(f"{len(results) - failed}/{len(results)} checks passed")
            if failed:
                return harness.EXIT_CHECK
    except DivergenceError as err:
        print(f"diverged: {err}", file=sys.stderr)
        return harness.EXIT_DIVERGENCE
    except (InvalidConfigError, InvalidArgumentError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return harness.EXIT_CONFIG
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return harness.EXIT_CONFIG
    return harness.EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
