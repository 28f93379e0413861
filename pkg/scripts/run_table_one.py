"""Reproduce the three-on-three engagement: PNG-only baseline vs filtered run.

Writes both runs' CSV logs under --out and prints the side-by-side summary.
"""

from __future__ import annotations

import argparse

from rcbf_swarm.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="runs/threeVthree")
    parser.add_argument("--nav-constant", type=float, default=None)
    parser.add_argument("--dt", type=float, default=None)
    args = parser.parse_args()

    argv = ["compare", "threeVthree", "--out", args.out]
    if args.nav_constant is not None:
        argv += ["--override", f"guidance.nav_constant={args.nav_constant}"]
    if args.dt is not None:
        argv += ["--override", f"sim.dt={args.dt}"]
    return cli_main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
