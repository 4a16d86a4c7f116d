"""Command-line entry point.

Subcommands mirror the experiment kinds plus artifact comparison:

    lrbounds bounds|exact|walk|circuit|protocols --config cfg.json --out DIR
    lrbounds compare A B --tolerance 1e-9

Exit codes: 0 success, 2 validation failure, 3 resource cap, 4 numeric
failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import NumericError, ResourceLimitError
from .runner import compare, load_config, run

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3
EXIT_NUMERIC = 4

_KIND_BY_COMMAND = {
    "bounds": "bounds",
    "exact": "exact_verify",
    "walk": "walk",
    "circuit": "circuit",
    "protocols": "protocols",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrbounds",
                                     description="speed-limit bound experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in _KIND_BY_COMMAND:
        p = sub.add_parser(command, help=f"run a {command} experiment")
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="64-bit RNG seed")
        p.add_argument("--workers", type=int, default=None, help="worker threads")
    p = sub.add_parser("compare", help="compare two artifacts cell-wise")
    p.add_argument("run_a")
    p.add_argument("run_b")
    p.add_argument("--tolerance", type=float, default=0.0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "compare":
            report = compare(args.run_a, args.run_b, args.tolerance)
            print(json.dumps(report.to_json_dict(), indent=1))
            return EXIT_OK if report.ok else EXIT_NUMERIC
        config = load_config(args.config, out=args.out, seed=args.seed,
                             workers=args.workers)
        expected = _KIND_BY_COMMAND[args.command]
        if config.kind != expected:
            raise ValueError(
                f"config kind {config.kind!r} does not match subcommand "
                f"{args.command!r} (expected {expected!r})")
        written = run(config)
        for name in sorted(written):
            print(written[name])
        return EXIT_OK
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ResourceLimitError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
