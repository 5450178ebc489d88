"""Write the small synthetic MovieLens-style ratings file used by the tests.

Ten items get 19 ratings each and two filler items get 5 each (200 rows).
Item means are spaced about 0.09 apart after normalisation, so every task of
the movielens-fig2 sweep at N=10 finishes quickly.
"""

import argparse
import csv
from pathlib import Path

import numpy as np

TARGETS = (4.75, 4.3, 3.85, 3.4, 2.95, 2.5, 2.05, 1.6, 1.15, 0.7)


def ratings_for(target: float, count: int) -> list[float]:
    lo = np.floor(target * 2) / 2
    hi = lo + 0.5
    n_hi = int(round((target - lo) / 0.5 * count))
    out = [hi] * n_hi + [lo] * (count - n_hi)
    # widen one lo/hi pair when possible; the sum is unchanged
    if n_hi and count - n_hi and lo - 0.5 > 0 and hi + 0.5 <= 5.0:
        out[0] += 0.5
        out[-1] -= 0.5
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=Path(__file__).resolve().parents[1] / "tests/data/ratings_fixture.csv")
    ap.add_argument("--seed", type=int, default=20240607)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    rows = []
    for k, target in enumerate(TARGETS):
        rows += [(101 + k, r) for r in ratings_for(target, 19)]
    rows += [(111, r) for r in (5.0, 4.0, 3.0, 4.5, 2.0)]
    rows += [(112, r) for r in (1.0, 3.5, 2.5, 4.0, 3.0)]
    order = rng.permutation(len(rows))
    users = rng.integers(1, 60, size=len(rows))
    stamps = np.sort(rng.integers(1_100_000_000, 1_500_000_000, size=len(rows)))
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["userId", "movieId", "rating", "timestamp"])
        for idx, (user, stamp) in zip(order, zip(users, stamps)):
            item, rating = rows[idx]
            w.writerow([int(user), item, f"{rating:.1f}", int(stamp)])
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
