#!/usr/bin/env python3
"""Run every experiment config in configs/ and summarize the outputs.

Usage: python3 scripts/reproduce_all.py [--configs DIR]

Each config writes into its own output directory (see the [outputs] table);
set BARYPOT_OUTDIR to redirect a single run instead.
"""

import argparse
import pathlib
import sys
import time

from barypot.cli import main as cli_main


def run_all(config_dir: pathlib.Path) -> int:
    configs = sorted(config_dir.glob("*.toml"))
    if not configs:
        print(f"no configs found in {config_dir}", file=sys.stderr)
        return 1
    failures = []
    for cfg in configs:
        start = time.monotonic()
        print(f"== {cfg.name}")
        code = cli_main(["run", str(cfg)])
        elapsed = time.monotonic() - start
        status = "ok" if code == 0 else f"exit {code}"
        print(f"== {cfg.name}: {status} ({elapsed:.1f}s)")
        if code != 0:
            failures.append((cfg.name, code))
    if failures:
        print(f"failed: {failures}", file=sys.stderr)
        return 1
    print(f"all {len(configs)} configs completed")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--configs",
        default=str(pathlib.Path(__file__).resolve().parent.parent / "configs"),
        help="directory of TOML experiment configs",
    )
    args = parser.parse_args()
    sys.exit(run_all(pathlib.Path(args.configs)))
