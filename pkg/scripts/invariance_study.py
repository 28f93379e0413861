"""Randomized two-effector crossing encounters under the safety filter.

Samples encounters whose initial pair state lies in the restricted safe set
(h <= 0 and H <= 0), runs each for the given horizon with both agents
filtered, and reports the worst barrier value reached. A safe outcome keeps
h below zero for every run.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import rcbf_swarm as rs
from rcbf_swarm.barrier import barrier_eval
from rcbf_swarm.geometry import pair_geometry
from rcbf_swarm.safety_filter import scenario_a_max
from tests.test_acceptance import _random_encounter  # same sampler as the acceptance suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=20240811)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    r_s = 300.0
    a_max = None
    worst_h = -math.inf
    grazes = 0
    done = 0
    started = time.perf_counter()
    while done < args.runs:
        cfg = _random_encounter(rng)
        if a_max is None:
            a_max = scenario_a_max(cfg)
        ev = barrier_eval(pair_geometry(cfg.agents[0].initial, cfg.agents[1].initial), r_s, a_max)
        if ev.h > 0.0 or ev.big_h > 0.0:
            continue
        done += 1
        log = rs.run(cfg, log_trajectory=False)
        sep = log.outcome.min_effector_separation
        worst_h = max(worst_h, r_s * r_s - sep * sep)
        if sep < r_s + 20.0:
            grazes += 1
        if done % 20 == 0:
            print(f"  {done}/{args.runs} runs, worst h so far {worst_h:.3g} m^2")
    elapsed = time.perf_counter() - started
    print(f"{args.runs} runs in {elapsed:.1f}s, {grazes} grazing encounters")
    print(f"worst barrier value h = {worst_h:.6g} m^2 ({'SAFE' if worst_h <= 0 else 'VIOLATED'})")
    return 0 if worst_h <= 1e-6 * r_s * r_s else 1


if __name__ == "__main__":
    raise SystemExit(main())
