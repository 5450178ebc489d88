"""Rerun the synthetic Table 2 comparison and print it next to the printed values.

    python3 scripts/reproduce_table2.py --reps 100 --out results/
"""

import argparse

from rai.harness import TABLE2_PUBLISHED, reproduce


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--reps", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--delta", type=float, default=0.01)
    ap.add_argument("--out", default="results")
    args = ap.parse_args(argv)

    out = reproduce("table2", args.reps, args.seed, args.out, delta=args.delta,
                    progress=lambda s: print(f"  {s.task} {s.algorithm:12s} {s.mean:10.1f}", flush=True))
    print(f"\n{'task':6s} {'algorithm':12s} {'mean':>10s} {'std':>9s} {'printed':>8s} {'ratio':>6s} errors")
    for s in out.summaries:
        printed = TABLE2_PUBLISHED[(int(s.task[4:]), s.algorithm)]
        print(f"{s.task:6s} {s.algorithm:12s} {s.mean:10.1f} {s.std:9.1f} {printed:8d} "
              f"{s.mean / printed:6.2f} {s.errors}")
    print(f"\nwrote {out.csv_path}")


if __name__ == "__main__":
    main()
