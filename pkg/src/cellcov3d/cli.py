"""Command-line entry point.

Exit codes: 0 success, 1 validation or usage error, 2 numerical failure or
degenerate geometry, 3 acceptance-suite failure.
"""

from __future__ import annotations

import argparse
import sys

from ._version import VERSION
from .acceptance import list_criteria, run_acceptance
from .analytic import DensityConfig, coverage_bounds, interference_laplace
from .errors import ConfigurationError, DegenerateGeometryError, NumericalError
from .runner import SweepResult, _metadata, load_config, run_fig1, run_fig2, run_fig3
from .simulate import db_to_linear


class _Parser(argparse.ArgumentParser):
    """argparse subclass whose usage errors use exit code 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(result: SweepResult, out: str | None) -> None:
    if out:
        path = result.write_csv(out)
        print(f"wrote {path}", file=sys.stderr)
    else:
        sys.stdout.write(result.to_csv_text())


def _overrides(args, trials_field: str | None) -> dict:
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    if trials_field is not None and args.trials is not None:
        overrides[trials_field] = args.trials
    if getattr(args, "theta_db", None) is not None:
        overrides["theta_db"] = args.theta_db
    return overrides


def _cmd_fig1(args) -> int:
    config = load_config(args.config, _overrides(args, "activity_draws"))
    _emit(run_fig1(config), args.out)
    return 0


def _cmd_fig2(args) -> int:
    config = load_config(args.config, _overrides(args, "link_draws"))
    _emit(run_fig2(config), args.out)
    return 0


def _cmd_fig3(args) -> int:
    config = load_config(args.config, _overrides(args, "trials"))
    _emit(run_fig3(config), args.out)
    return 0


def _cmd_laplace(args) -> int:
    config = load_config(args.config)
    rows = []
    for s in args.s:
        value = interference_laplace(
            s,
            args.serving_distance,
            args.lambda_active,
            config.channel,
            config.quadrature,
            upper_limit=args.upper_limit,
        )
        rows.append((s, value))
    result = SweepResult(
        kind="laplace",
        columns=("s", "laplace"),
        rows=tuple(rows),
        metadata=_metadata(
            "laplace",
            config,
            lambda_active=format(args.lambda_active, ".12g"),
            serving_distance=format(args.serving_distance, ".12g"),
        ),
    )
    _emit(result, args.out)
    return 0


def _cmd_bounds(args) -> int:
    config = load_config(args.config)
    theta_db = args.theta_db if args.theta_db is not None else config.theta_db
    densities = DensityConfig(args.lambda_ap, args.lambda_ue)
    bounds = coverage_bounds(
        db_to_linear(theta_db), densities, config.channel, config.quadrature
    )
    result = SweepResult(
        kind="bounds",
        columns=(
            "lambda_ap",
            "lambda_ue",
            "theta_db",
            "cov_lower",
            "cov_upper",
            "lower_error",
            "upper_error",
        ),
        rows=(
            (
                args.lambda_ap,
                args.lambda_ue,
                theta_db,
                bounds.lower,
                bounds.upper,
                bounds.lower_error,
                bounds.upper_error,
            ),
        ),
        metadata=_metadata("bounds", config),
    )
    _emit(result, args.out)
    return 0


def _cmd_acceptance(args) -> int:
    if args.list:
        for name, description in list_criteria():
            print(f"{name:<15}{description}")
        return 0
    config = load_config(args.config)
    threads = args.threads if args.threads is not None else config.threads
    ok = run_acceptance(names=args.only or None, config=config, threads=threads)
    return 0 if ok else 3


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="cellcov3d",
        description="Coverage analysis for 3-D cellular networks: "
        "analytic bounds, Monte-Carlo simulation, and figure-data sweeps.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p, trials_help=None, theta=False):
        p.add_argument("--config", metavar="PATH", help="TOML config file")
        p.add_argument("--out", metavar="PATH", help="output CSV path (default: stdout)")
        p.add_argument("--seed", type=int, metavar="N", help="override the base seed")
        p.add_argument(
            "--threads",
            type=int,
            metavar="N",
            help="worker processes; never changes the numbers",
        )
        if trials_help:
            p.add_argument("--trials", type=int, metavar="N", help=trials_help)
        if theta:
            p.add_argument("--theta-db", type=float, metavar="DB", help="SIR threshold in dB")

    p1 = sub.add_parser("fig1", help="activity probability sweep, analytic + empirical")
    common(p1, trials_help="network draws per sweep point")
    p1.set_defaults(func=_cmd_fig1)

    p2 = sub.add_parser("fig2", help="link LOS probability sweep, analytic + empirical")
    common(p2, trials_help="network draws per sweep point")
    p2.set_defaults(func=_cmd_fig2)

    p3 = sub.add_parser("fig3", help="coverage bounds + simulated coverage sweep")
    common(p3, trials_help="Monte-Carlo trials per sweep point", theta=True)
    p3.set_defaults(func=_cmd_fig3)

    pl = sub.add_parser("laplace", help="interference Laplace transform at given s values")
    pl.add_argument("--lambda-active", type=float, required=True, metavar="DENSITY")
    pl.add_argument("--serving-distance", type=float, required=True, metavar="METERS")
    pl.add_argument("--s", type=float, nargs="+", required=True, metavar="S")
    pl.add_argument(
        "--upper-limit",
        type=float,
        default=None,
        metavar="METERS",
        help="truncate the interference field at this radius",
    )
    pl.add_argument("--config", metavar="PATH", help="TOML config file")
    pl.add_argument("--out", metavar="PATH", help="output CSV path (default: stdout)")
    pl.set_defaults(func=_cmd_laplace)

    pb = sub.add_parser("bounds", help="analytic coverage bounds at one operating point")
    pb.add_argument("--lambda-ap", type=float, required=True, metavar="DENSITY")
    pb.add_argument("--lambda-ue", type=float, required=True, metavar="DENSITY")
    pb.add_argument("--theta-db", type=float, default=None, metavar="DB")
    pb.add_argument("--config", metavar="PATH", help="TOML config file")
    pb.add_argument("--out", metavar="PATH", help="output CSV path (default: stdout)")
    pb.set_defaults(func=_cmd_bounds)

    pa = sub.add_parser("acceptance", help="run the acceptance suite")
    pa.add_argument("--list", action="store_true", help="enumerate checks without running")
    pa.add_argument(
        "--only",
        action="append",
        metavar="NAME",
        help="run only this criterion (repeatable)",
    )
    pa.add_argument("--config", metavar="PATH", help="TOML config file")
    pa.add_argument("--threads", type=int, default=None, metavar="N")
    pa.set_defaults(func=_cmd_acceptance)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 0
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except DegenerateGeometryError as exc:
        print(f"degenerate geometry: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
