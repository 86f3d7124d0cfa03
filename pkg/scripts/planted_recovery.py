"""Recall of planted relevant codes in the final selection, against chance.

    python scripts/planted_recovery.py --seeds 20 --fault-kind gradual
"""

from __future__ import annotations

import argparse

import numpy as np

from logsel.config import RunConfig
from logsel.pipeline import run_selection
from logsel.synth import ScenarioSpec, generate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--fault-kind", choices=("gradual", "sudden"), default="gradual")
    ap.add_argument("--codes", type=int, default=300)
    ap.add_argument("--relevant", type=int, default=10)
    ap.add_argument("--fraction", type=float, default=0.20)
    ap.add_argument("--target-count", type=int, default=40)
    ap.add_argument("--rho", type=float, default=0.8)
    args = ap.parse_args()

    cfg = RunConfig(fraction=args.fraction, target_count=args.target_count, rho=args.rho)
    rng = np.random.default_rng(0)
    recall, after_cut, chance = [], [], []
    for seed in range(args.seeds):
        spec = ScenarioSpec(
            seed=seed, n_codes=args.codes, n_relevant=args.relevant, fault_kind=args.fault_kind
        )
        dataset, truth = generate(spec)
        label = truth.labels[0]
        run = run_selection(dataset, label.machine, label.robot, cfg)
        planted = truth.relevant_codes
        final = set(run.final.selected)
        recall.append(len(final & planted) / len(planted))
        after_cut.append(len(set(run.relevant.selected) & planted) / len(planted))
        pick = rng.choice(run.report.codes, size=len(final), replace=False)
        chance.append(len(set(pick) & planted) / len(planted))
        print(f"seed {seed:>3}: relevance cut {after_cut[-1]:.2f}  final {recall[-1]:.2f}  random {chance[-1]:.2f}")
    print(
        f"mean over {args.seeds} seeds: relevance cut {np.mean(after_cut):.3f}"
        f"  final {np.mean(recall):.3f}  random {np.mean(chance):.3f}"
    )


if __name__ == "__main__":
    main()
