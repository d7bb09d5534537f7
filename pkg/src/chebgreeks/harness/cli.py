"""Command-line entry point.

    chebgreeks run <config> [--out PATH] [--seed N] [--threads N]
    chebgreeks list-experiments

``CHEBGREEKS_SEED`` overrides the configured seed; ``--seed`` overrides both.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from chebgreeks.errors import ConfigError
from chebgreeks.harness.config import EXPERIMENTS, load_config
from chebgreeks.harness.experiments import SCHEMAS, run_experiment

SEED_ENV = "CHEBGREEKS_SEED"


def _side_path(out: Path, key: str) -> Path:
    return out if key == "main" else out.with_name(f"{out.stem}.{key}{out.suffix or '.csv'}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chebgreeks", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment config")
    run.add_argument("config")
    run.add_argument("--out", help="output CSV (default: [experiment] output, else results/<name>.csv)")
    run.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    run.add_argument("--threads", type=int, default=1)
    sub.add_parser("list-experiments", help="list experiment names and their columns")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-experiments":
        for name in EXPERIMENTS:
            for key, cols in SCHEMAS[name].items():
                print(f"{name}\t{key}\t{','.join(cols)}")
        return 0

    try:
        seed = args.seed
        if seed is None and os.environ.get(SEED_ENV):
            seed = int(os.environ[SEED_ENV])
        if seed is not None and not 0 <= seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        cfg = load_config(args.config, seed=seed)
        out = Path(args.out or cfg.output or f"results/{Path(args.config).stem}.csv")
        tables = run_experiment(cfg, threads=args.threads)
        for key, table in tables.items():
            path = table.write(_side_path(out, key))
            print(path)
    except (ConfigError, ValueError, ArithmeticError, OSError) as exc:
        print(f"chebgreeks: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
