"""Command-line entry point.

  safebo-plots regret  --metric R --out fig.png LABEL=run.csv [LABEL=run.csv ...]
  safebo-plots samples --run run.csv --oracle oracle.csv --out fig.png

Repeated LABEL= arguments group seed files under one curve. Exit codes:
0 ok, 1 usage error, 2 bad input content.
"""

from __future__ import annotations

import argparse
import sys

from .figures import METRICS, PlotJob, plot_regret, plot_samples
from .io import SchemaError


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="safebo-plots", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    regret = sub.add_parser("regret")
    regret.add_argument("--metric", default="R", choices=sorted(METRICS))
    regret.add_argument("--out", required=True)
    regret.add_argument("inputs", nargs="+", metavar="LABEL=PATH")
    samples = sub.add_parser("samples")
    samples.add_argument("--run", required=True)
    samples.add_argument("--oracle", required=True)
    samples.add_argument("--out", required=True)
    return parser


def _group_inputs(pairs: list[str]) -> dict[str, list[str]]:
    groups: dict[str, list[str]] = {}
    for pair in pairs:
        if "=" not in pair:
            raise _UsageError(f"expected LABEL=PATH, got {pair!r}")
        label, path = pair.split("=", 1)
        groups.setdefault(label, []).append(path)
    return groups


def cli_main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "regret":
            job = PlotJob(inputs=_group_inputs(args.inputs), metric=args.metric, out=args.out)
            plot_regret(job)
        else:
            job = PlotJob(inputs={"run": [args.run]}, out=args.out, oracle=args.oracle)
            plot_samples(job)
        print(f"wrote {args.out}")
        return 0
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())
