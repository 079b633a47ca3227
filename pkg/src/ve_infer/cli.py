"""Command-line interface: ``ve-infer <command> [options]``.

Exit codes: 0 success, 1 acceptance or validation failure, 2 input error,
3 numerical error.
"""

from __future__ import annotations

import argparse
import itertools
import math
import os
import sys

from . import analysis
from ._version import __version__
from .core import RatePair
from .errors import DomainError, NumericalError
from .mcmc import McmcConfig, atomic_write_text
from .model import elicit_priors, prior_mean_ve

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
    return value


def _float_list(text: str) -> list[float]:
    return [_finite_float(t) for t in text.split(",") if t.strip()]


def _add_mcmc_flags(p, with_seed=True):
    if with_seed:
        p.add_argument("--seed", type=int, help=f"random seed (falls back to ${analysis.SEED_ENV}, then the default)")
    p.add_argument("--chains", type=int)
    p.add_argument("--iterations", type=int, help="iterations per chain, burn-in included")
    p.add_argument("--burn-in", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ve-infer", description="Bayesian estimation of vaccine efficacy.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run an analysis request and write a JSON report")
    p.add_argument("--input", required=True, help="request JSON file")
    p.add_argument("--output", help="report JSON file (default: stdout)")
    p.add_argument("--chain-output", help="CSV file for the retained MCMC draws")
    p.add_argument("--method", choices=analysis.METHODS)
    p.add_argument("--level", type=_finite_float)
    _add_mcmc_flags(p)
    p.add_argument("--moment-mode", choices=("paper", "corrected"))
    p.add_argument("--variance-n", choices=("per-cohort", "appendix-nv"))

    p = sub.add_parser("elicit", help="default Gamma priors from a prior VE guess")
    p.add_argument("--ve-hat", type=_finite_float, required=True, help="prior guess of VE, in [0, 1)")
    p.add_argument(
        "--lambda-c-hat",
        type=_finite_float,
        default=365.0 / 7.0,
        help="guessed control infection rate per year (default 365/7, a one-week mean)",
    )

    p = sub.add_parser("simulate", help="simulate one two-arm trial")
    p.add_argument("--n-v", type=int, required=True)
    p.add_argument("--n-c", type=int, required=True)
    p.add_argument("--lambda-v", type=_finite_float, required=True)
    p.add_argument("--lambda-c", type=_finite_float, required=True)
    p.add_argument("--d", type=_finite_float, required=True, help="study duration in years")
    p.add_argument("--seed", type=int)
    p.add_argument("--output", help="TrialData JSON file (default: stdout)")

    p = sub.add_parser("validate-moments", help="check the follow-up moment formulas against oracles")
    p.add_argument("--lambdas", type=_float_list, help="comma-separated rates; crossed with --durations")
    p.add_argument("--durations", type=_float_list, help="comma-separated durations")
    p.add_argument("--grid-points", type=int, default=50, help="size of the default log grid")
    p.add_argument("--replicates", type=int, default=1_000_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--output", help="CSV file (default: stdout)")

    p = sub.add_parser("reproduce", help="rerun the published interim analysis and compare")
    _add_mcmc_flags(p)
    p.add_argument("--output", help="optional JSON file with the full comparison")
    return parser


def _seed(flag, default=None) -> int:
    if flag is not None:
        return flag
    env = analysis._seed_from_env(os.environ)
    if env is not None:
        return env
    return McmcConfig().seed if default is None else default


def _emit(text: str, path) -> None:
    if path:
        atomic_write_text(path, text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    payload = analysis.read_json_file(args.input)
    if not isinstance(payload, dict):
        raise analysis.RequestError([f"{args.input}: top level must be a JSON object"])
    overrides = {
        "method": args.method,
        "level": args.level,
        "seed": args.seed,
        "chains": args.chains,
        "iterations": args.iterations,
        "burn_in": args.burn_in,
        "moment_mode": args.moment_mode,
        "variance_n": args.variance_n,
    }
    request = analysis.resolve_request(payload, overrides)
    outcome = analysis.run_analysis(request)
    text = analysis.dumps(outcome.report)
    if args.chain_output and outcome.chain is not None:
        outcome.chain.to_csv(args.chain_output)
    _emit(text, args.output)
    for w in outcome.report["results"].get("full", {}).get("warnings", []):
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def cmd_elicit(args) -> int:
    priors = elicit_priors(args.ve_hat, args.lambda_c_hat)
    out = priors.to_dict()
    out["prior_mean_ve"] = prior_mean_ve(priors) if priors.a_c > 1.0 else None
    out["ve_hat"] = args.ve_hat
    out["lambda_c_hat"] = args.lambda_c_hat
    sys.stdout.write(analysis.dumps(out))
    return EXIT_OK


def cmd_simulate(args) -> int:
    from .simulation import simulate_trial

    if args.n_v < 1 or args.n_c < 1:
        raise DomainError(f"cohort sizes must be >= 1, got n_v={args.n_v}, n_c={args.n_c}")
    rates = RatePair(args.lambda_v, args.lambda_c)
    data = simulate_trial(args.n_v, args.n_c, rates, args.d, _seed(args.seed))
    _emit(analysis.dumps(data.to_dict()), args.output)
    return EXIT_OK


def cmd_validate_moments(args) -> int:
    from .validation import default_grid, rows_to_csv, validate_moment_grid

    if args.lambdas is None and args.durations is None:
        if args.grid_points < 1:
            raise DomainError(f"--grid-points must be >= 1, got {args.grid_points}")
        grid = default_grid(args.grid_points)
    else:
        grid = list(itertools.product(args.lambdas or [], args.durations or []))
    rows = validate_moment_grid(grid, replicates=args.replicates, seed=_seed(args.seed))
    _emit(rows_to_csv(rows), args.output)
    failed = [r for r in rows if not r.corrected_pass]
    paper_failed = sum(not r.paper_pass for r in rows)
    print(
        f"{len(rows)} grid points: corrected variance failed at {len(failed)}, "
        f"paper-mode variance failed at {paper_failed}",
        file=sys.stderr,
    )
    return EXIT_FAILED if failed else EXIT_OK


def cmd_reproduce(args) -> int:
    from .reproduce import run_reproduction

    base = McmcConfig()
    cfg = McmcConfig(
        chains=args.chains if args.chains is not None else base.chains,
        iterations=args.iterations if args.iterations is not None else base.iterations,
        burn_in=args.burn_in if args.burn_in is not None else base.burn_in,
        seed=_seed(args.seed),
    )
    rep = run_reproduction(cfg)
    print(rep.table())
    if args.output:
        payload = {
            "mcmc": cfg.to_dict(),
            "conditional": rep.conditional.to_dict(),
            "mimic": rep.mimic.to_dict(),
            "default": rep.default.to_dict(),
            "comparison": [
                {"name": r.name, "published": r.published, "observed": r.observed, "tolerance": r.tolerance, "ok": r.ok}
                for r in rep.rows
            ],
            "version": __version__,
        }
        atomic_write_text(args.output, analysis.dumps(payload))
    return EXIT_OK if rep.ok else EXIT_FAILED


COMMANDS = {
    "analyze": cmd_analyze,
    "elicit": cmd_elicit,
    "simulate": cmd_simulate,
    "validate-moments": cmd_validate_moments,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except analysis.RequestError as exc:
        for line in exc.diagnostics:
            print(f"error: {line}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
