"""Detection counts with all features vs selected features on synthetic fleets.

For each seed, generates a fleet of gradual and sudden faults, runs both
detection arms and prints one row per (seed, window).  Use ``--windows`` to see
how sensitive the counts are to the detection window.

    python scripts/fleet_comparison.py --seeds 0 1 2 --windows 0 7 14 30
"""

from __future__ import annotations

import argparse
import time

from logsel.config import RunConfig
from logsel.evaluation import compare_pipelines
from logsel.synth import ScenarioSpec, generate_fleet


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("--gradual", type=int, default=6)
    ap.add_argument("--sudden", type=int, default=6)
    ap.add_argument("--windows", type=int, nargs="+", default=[14])
    ap.add_argument("--target-count", type=int, default=40)
    ap.add_argument("--k", type=int, default=5)
    args = ap.parse_args()

    print(f"{'seed':>4}  {'window':>6}  {'all features':>12}  {'selected':>8}  {'seconds':>7}")
    for seed in args.seeds:
        t0 = time.perf_counter()
        dataset, truth = generate_fleet(ScenarioSpec(seed=seed), args.gradual, args.sudden)
        for window in args.windows:
            cfg = RunConfig(window=window, target_count=args.target_count, k=args.k)
            cmp = compare_pipelines(dataset, truth.labels, cfg)
            elapsed = time.perf_counter() - t0
            print(
                f"{seed:>4}  {window:>6}  {cmp.raw_detected:>9}/{cmp.total:<2}"
                f"  {cmp.selected_detected:>5}/{cmp.total:<2}  {elapsed:>7.1f}"
            )


if __name__ == "__main__":
    main()
