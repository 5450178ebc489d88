"""Command line: ``rai bound|run|reproduce|preset``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from .harness import (
    PRESETS,
    ConfigError,
    load_config,
    reproduce,
    run_experiment,
    write_csv,
)
from .ingest import IngestError
from .instance import (
    TASKS,
    InstanceError,
    butterscotch_upper_bound,
    gap_report,
    lower_bound,
    task_preset,
    vanilla_upper_bound,
)

EXIT_OK, EXIT_CONFIG, EXIT_INGEST, EXIT_BUDGET = 0, 2, 3, 4


def _fmt(x: float) -> str:
    return "inf" if x == float("inf") else f"{x:.6g}"


def cmd_bound(args) -> int:
    config = load_config(args.config)
    instance, _ = config.resolve()
    report = gap_report(instance)
    print(f"clusters  c = {instance.sizes}")
    print(f"required  r = {instance.required}")
    for i, gaps in enumerate(report.arm_gaps):
        print(f"cluster {i}: gaps {' '.join(_fmt(g) for g in gaps)}  "
              f"bottleneck {_fmt(report.cluster_bottlenecks[i])}")
    print(f"bottleneck gap     {_fmt(report.bottleneck)}")
    print(f"lower bound        {_fmt(lower_bound(instance, config.delta))}")
    print(f"vanilla upper      {_fmt(vanilla_upper_bound(instance, config.delta))}")
    print(f"butterscotch upper {_fmt(butterscotch_upper_bound(instance, config.delta))}")
    return EXIT_OK


def cmd_run(args) -> int:
    config = load_config(args.config)
    summary, records = run_experiment(config)
    if args.json:
        text = json.dumps({
            "config": config.to_dict(),
            "summary": {**{k: v for k, v in summary.__dict__.items() if k != "totals"},
                        "error_rate": summary.error_rate, "upper_bound": summary.upper_bound},
            "records": [r.__dict__ for r in records],
        }, indent=2, default=list) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        write_csv([summary], args.out or sys.stdout)
    if summary.aborted:
        print(f"error: {summary.aborted} replication(s) exceeded the pull budget", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_reproduce(args) -> int:
    def progress(s):
        print(f"{s.task:>22} {s.algorithm:>12} merging={str(s.merging).lower():5} "
              f"mean={s.mean:10.1f} errors={s.errors}", file=sys.stderr, flush=True)

    ns = [int(x) for x in args.n.split(",")] if args.n else None
    result = reproduce(args.preset, args.reps, args.seed, args.out, args.ratings, ns,
                       args.delta, progress)
    if result.csv_path is None:
        write_csv(result.summaries, sys.stdout)
    else:
        print(f"wrote {result.csv_path} and {result.manifest_path}", file=sys.stderr)
    if any(s.aborted for s in result.summaries):
        print("error: some replications exceeded the pull budget", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_preset(args) -> int:
    ratios = [int(x) for x in args.ratios.split(":")] if args.ratios else None
    clusters, req = task_preset(args.task, args.n, args.k, args.m, ratios)
    print(json.dumps({"c": list(clusters.sizes), "r": list(req.required)}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rai", description="Representative arm identification experiments")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="gap report, lower bound and both upper bounds")
    p.add_argument("config")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("run", help="run one experiment config")
    p.add_argument("config")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--json", action="store_true", help="JSON with per-replication records instead of CSV")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("reproduce", help="rerun a table or sweep from the experiments")
    p.add_argument("preset", choices=PRESETS)
    p.add_argument("--ratings", help="ratings CSV (movielens-fig2)")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--n", help="comma-separated arm counts for movielens-fig2 (default 10,20,30,40,50)")
    p.add_argument("--out", help="directory for <preset>.csv and the manifest (default: CSV to stdout)")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("preset", help="print the (c, r) pair of a classical task")
    p.add_argument("task", choices=TASKS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--ratios", help="cluster ratios a:b:c (coarse-ranking)")
    p.set_defaults(func=cmd_preset)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except IngestError as exc:
        print(f"ingest error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except (ConfigError, InstanceError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
