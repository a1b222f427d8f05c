#!/usr/bin/env python3
"""Desk-scale starpartite/regular distinguisher demo.

The fully private noise level needs astronomically large n, so this demo
scales the report noise down (the output is therefore not certified
private).  Emits the distinguish CSV for both input families.
"""

import argparse
import sys

from lndp.harness import (
    ExperimentSpec,
    GraphSpec,
    distinguish_records_to_csv,
    run_distinguish_trials,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--t", type=int, default=5)
    ap.add_argument("--eps", type=float, default=0.2)
    ap.add_argument("--delta", type=float, default=0.05)
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--noise-scale", type=float, default=1e-6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="distinguish_demo.csv")
    args = ap.parse_args()

    records = []
    for family, offset in (("star", 0), ("regular", 1)):
        spec = ExperimentSpec(
            task="distinguish",
            graph=GraphSpec(family="starpartite" if family == "star" else "regular",
                            n=args.n,
                            t=args.t if family == "star" else None,
                            d=args.t if family == "regular" else None),
            eps=args.eps,
            delta=args.delta,
            trials=args.trials,
            master_seed=args.seed + offset,
            t=args.t,
            family_label=family,
            debug_noise_scale=args.noise_scale,
        )
        records.extend(run_distinguish_trials(spec))
    with open(args.out, "w") as fh:
        fh.write(distinguish_records_to_csv(records))
    correct = sum(r.correct for r in records)
    print(f"{correct}/{len(records)} correct; wrote {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
