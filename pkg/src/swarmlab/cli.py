"""Command line entry point: ``swarmlab run CONFIG [--seed N] [--out DIR] [--quiet]``."""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config
from .runner import run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmlab", description="Run swarm experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment from a JSON config")
    run.add_argument("config", help="experiment config (or a previous manifest.json)")
    run.add_argument("--seed", type=int, default=None, help="override the config seed")
    run.add_argument("--out", default=None, help="output directory")
    run.add_argument("--quiet", action="store_true", help="no summary on stdout")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, seed=args.seed, output=args.out)
    except ConfigError as exc:
        print(f"swarmlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        manifest = run_experiment(config)
    except Exception as exc:  # noqa: BLE001 - any module failure maps to one exit code
        print(f"swarmlab: {config.kind} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if not args.quiet:
        for name, digest in manifest["outputs"].items():
            print(f"{config.output}/{name} sha256={digest}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
