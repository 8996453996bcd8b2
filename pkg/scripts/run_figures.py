#!/usr/bin/env python3
"""Run the four coefficient/ratio sweeps with default settings.

Writes fig1..fig4 CSVs and SVG panels into the output directory (default
./out, overridable with --out-dir or PRIORCS_OUT_DIR).
"""

import argparse
import sys

from priorcs.cli import main as priorcs_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=None)
    parser.add_argument("--config", default=None, help="shared config file for all four sweeps")
    args = parser.parse_args()
    extra = []
    if args.out_dir:
        extra += ["--out-dir", args.out_dir]
    for command in ("fig1", "fig2", "fig3", "fig4"):
        argv = [command] + extra
        if args.config:
            argv += ["--config", args.config]
        code = priorcs_main(argv)
        if code != 0:
            print(f"{command} exited with {code}", file=sys.stderr)
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
