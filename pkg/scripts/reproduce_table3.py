"""Rerun the merging vs non-merging comparison (Table 3).

    python3 scripts/reproduce_table3.py --reps 100 --out results/
"""

import argparse
import math

from rai.harness import TABLE3_PUBLISHED, reproduce


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--reps", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results")
    args = ap.parse_args(argv)

    out = reproduce("table3", args.reps, args.seed, args.out)
    by = {(s.task, s.algorithm, s.merging): s for s in out.summaries}
    print(f"{'task':6s} {'algorithm':12s} {'merging':>10s} {'non-merging':>12s} {'2 SE':>7s}  printed")
    for (task, alg, merging), s in by.items():
        if not merging:
            continue
        other = by[(task, alg, False)]
        slack = 2 * math.hypot(s.stderr, other.stderr)
        t = int(task[4:])
        print(f"{task:6s} {alg:12s} {s.mean:10.1f} {other.mean:12.1f} {slack:7.1f}  "
              f"{TABLE3_PUBLISHED[(t, alg, True)]} / {TABLE3_PUBLISHED[(t, alg, False)]}")
    print(f"\nwrote {out.csv_path}")


if __name__ == "__main__":
    main()
