#!/usr/bin/env python3
"""Edge-probability estimation error across a sweep of graph sizes.

Emits the standard trial CSV with a sweep_key column — the input the
scaling plot consumes.
"""

import argparse
import sys

from lndp.harness import ExperimentSpec, GraphSpec, records_to_csv, run_experiment


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-values", type=int, nargs="+",
                    default=[1000, 2000, 4000, 8000])
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--eps", type=float, default=1.0)
    ap.add_argument("--delta", type=float, default=1e-6)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="er_scaling.csv")
    args = ap.parse_args()

    spec = ExperimentSpec(
        task="er",
        graph=GraphSpec(family="er", n=args.n_values[0], p=args.p),
        eps=args.eps,
        delta=args.delta,
        trials=args.trials,
        master_seed=args.seed,
        sweep_n=tuple(args.n_values),
    )
    records = run_experiment(spec)
    with open(args.out, "w") as fh:
        fh.write(records_to_csv(records))
    print(f"wrote {args.out} ({len(records)} rows)", file=sys.stderr)


if __name__ == "__main__":
    main()
