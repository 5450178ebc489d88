"""Error rates of the two LUCB finalisation rules on the ten-arm synthetic instance.

The default rule compares an arm with every arm above and below its block; the
neighbour-only rule looks at the adjacent blocks alone.  Only the first keeps
the error rate under delta.

    python3 scripts/lucb_rule_comparison.py --reps 50
"""

import argparse
import statistics
import time

from rai.algorithms import run_lucb
from rai.environments import RewardOracle, SeedPolicy, make_environment
from rai.harness import SYNTHETIC_MEANS, SYNTHETIC_SIZES, TABLE2_TASKS, row_key
from rai.instance import build_instance


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--reps", type=int, default=50)
    ap.add_argument("--delta", type=float, default=0.01)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=int, default=2_000_000)
    args = ap.parse_args(argv)

    print(f"{'task':6s} {'rule':14s} {'mean pulls':>11s} {'errors':>7s} {'budget hits':>11s} {'s/run':>6s}")
    for task, req in TABLE2_TASKS.items():
        inst = build_instance(SYNTHETIC_MEANS, SYNTHETIC_SIZES, req)
        env = make_environment(inst, "bernoulli")
        row = row_key(inst, "bernoulli")
        for neighbour_only in (False, True):
            totals, errors, hits = [], 0, 0
            start = time.perf_counter()
            for rep in range(args.reps):
                oracle = RewardOracle.seeded(env, SeedPolicy(args.seed), row, rep, args.budget)
                try:
                    res = run_lucb(inst.sizes, inst.required, oracle, args.delta,
                                   neighbour_only=neighbour_only)
                except Exception:
                    hits += 1
                    continue
                totals.append(res.total_pulls)
                errors += any(inst.cluster_of(oracle.to_global(a)) != i
                              for i, arms in enumerate(res.outputs) for a in arms)
            rule = "neighbour-only" if neighbour_only else "all-blocks"
            mean = statistics.mean(totals) if totals else float("nan")
            per = (time.perf_counter() - start) / args.reps
            print(f"task{task:<2d} {rule:14s} {mean:11.0f} {errors:7d} {hits:11d} {per:6.2f}", flush=True)


if __name__ == "__main__":
    main()
