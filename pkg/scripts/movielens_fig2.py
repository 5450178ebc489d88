"""Sweep N over the six classical tasks on a MovieLens ratings file (Figure 2 data).

    python3 scripts/movielens_fig2.py --ratings ml-latest/ratings.csv --reps 100
    python3 scripts/movielens_fig2.py --ratings tests/data/ratings_fixture.csv --n 10 --reps 10
"""

import argparse

from rai.harness import reproduce


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--ratings", required=True)
    ap.add_argument("--reps", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", default="10,20,30,40,50")
    ap.add_argument("--out", default="results")
    args = ap.parse_args(argv)

    ns = [int(x) for x in args.n.split(",")]
    out = reproduce("movielens-fig2", args.reps, args.seed, args.out, args.ratings, ns,
                    progress=lambda s: print(f"{s.task:24s} {s.algorithm:12s} {s.mean:12.1f} "
                                             f"errors={s.errors}", flush=True))
    print(f"wrote {out.csv_path}")


if __name__ == "__main__":
    main()
