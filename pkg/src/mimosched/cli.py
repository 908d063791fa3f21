"""Command-line entry point.

Subcommands:
    simulate <config>     run the experiment described by a config file
    preset <name>         run a bundled experiment preset
    validate <config>     parse and check a config file
    oracle <check-name>   run an independent reference computation

Exit codes: 0 success, 1 configuration error, 2 infeasible scenario.
"""

from __future__ import annotations

import argparse
import sys

from .harness import (
    ConfigError,
    PRESET_NAMES,
    figure_preset,
    load_experiment,
    run_experiment,
    serialize_results,
)
from .oracles import ORACLE_CHECKS, run_oracle_check
from .precoding import BDInfeasibleError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mimosched",
        description="Monte Carlo evaluation of user scheduling for "
        "heterogeneous downlink MU-MIMO with BD precoding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run an experiment from a config file")
    sim.add_argument("config")
    sim.add_argument("--out", default=None, help="output path (default: stdout CSV)")
    sim.add_argument("--format", choices=("csv", "json"), default="csv")
    sim.add_argument("--workers", type=int, default=None)

    pre = sub.add_parser(
        "preset", help=f"run a bundled preset ({', '.join(PRESET_NAMES)})"
    )
    pre.add_argument("name")
    pre.add_argument("--trials", type=int, default=None)
    pre.add_argument("--seed", type=int, default=None)
    pre.add_argument("--fidelity", action="store_true", help="raise trials to 20000")
    pre.add_argument("--out", default=None)
    pre.add_argument("--format", choices=("csv", "json"), default="csv")
    pre.add_argument("--workers", type=int, default=None)

    val = sub.add_parser("validate", help="parse and check a config file")
    val.add_argument("config")

    ora = sub.add_parser(
        "oracle",
        help=f"run a reference computation ({', '.join(sorted(ORACLE_CHECKS))})",
    )
    ora.add_argument("check")
    ora.add_argument("--seed", type=int, default=0)
    return parser


def _emit(summary, fmt: str, out: str | None) -> None:
    if out is None:
        import tempfile

        with tempfile.NamedTemporaryFile("w+", suffix=f".{fmt}") as tmp:
            serialize_results(summary, fmt, tmp.name)
            tmp.seek(0)
            sys.stdout.write(tmp.read())
    else:
        serialize_results(summary, fmt, out)
        print(f"wrote {out}", file=sys.stderr)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            spec = load_experiment(args.config)
            summary = run_experiment(spec, workers=args.workers)
            _emit(summary, args.format, args.out)
        elif args.command == "preset":
            spec = figure_preset(
                args.name, trials=args.trials, seed=args.seed, fidelity=args.fidelity
            )
            summary = run_experiment(spec, workers=args.workers)
            _emit(summary, args.format, args.out)
        elif args.command == "validate":
            spec = load_experiment(args.config)
            scn = spec.scenario
            print(
                f"ok: {len(scn.users)} users, m_t={scn.m_t}, "
                f"{len(scn.snr_db)} SNR points, {scn.trials} trials, "
                f"{len(spec.schedulers)} schedulers x {len(spec.criteria)} criteria"
            )
        elif args.command == "oracle":
            run_oracle_check(args.check, seed=args.seed)
    except (ConfigError, argparse.ArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BDInfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
