"""Command-line experiment runner (installed as `simulate`)."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys

from .experiment import (
    ConfigError,
    OutputFormat,
    format_summary,
    parse_config,
    run_experiment,
)

_LOG_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "quiet": logging.ERROR,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Run a bandit-vs-greedy IRS association sweep from a config file.",
    )
    parser.add_argument("--config", required=True, help="path to the config file")
    parser.add_argument("--out", help="override the output trace path")
    parser.add_argument(
        "--format", choices=["csv", "json"], help="override the output format"
    )
    parser.add_argument("--seed", type=int, help="override base_seed")
    parser.add_argument(
        "--replications", type=int, help="override the replication count"
    )
    parser.add_argument("--periods", type=int, help="override the period count")
    return parser


def main(argv=None) -> int:
    level = _LOG_LEVELS.get(os.environ.get("IRSBANDIT_LOG", "warning").lower())
    logging.basicConfig(level=level if level is not None else logging.WARNING)

    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1

    try:
        spec = parse_config(text)
        overrides = {}
        if args.seed is not None:
            overrides["base_seed"] = args.seed
        if args.replications is not None:
            overrides["replications"] = args.replications
        if args.periods is not None:
            overrides["periods"] = args.periods
        if overrides:
            spec = dataclasses.replace(
                spec, base=dataclasses.replace(spec.base, **overrides)
            )
        if args.out is not None:
            spec = dataclasses.replace(spec, output_path=args.out)
        if args.format is not None:
            spec = dataclasses.replace(spec, format=OutputFormat(args.format))
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        summary = run_experiment(spec)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    print(format_summary(summary))
    print(f"traces written to {spec.output_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
