"""Experiment configs, seeded replications, aggregation and table reproduction."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .algorithms import ALGORITHMS, RunResult, run_butterscotch, run_lucb, run_vanilla
from .environments import (
    DEFAULT_BUDGET,
    FAMILIES,
    BudgetExceeded,
    Environment,
    RewardModelError,
    RewardOracle,
    SeedPolicy,
    make_environment,
)
from .ingest import build_movielens_instance, parse_ratings, top_items
from .instance import (
    TASKS,
    ClusterSpec,
    Instance,
    InstanceError,
    RequirementSpec,
    build_instance,
    butterscotch_upper_bound,
    lower_bound,
    task_preset,
    vanilla_upper_bound,
)

log = logging.getLogger(__name__)

SYNTHETIC_MEANS = (0.9, 0.85, 0.7, 0.66, 0.65, 0.6, 0.4, 0.35, 0.2, 0.15)
SYNTHETIC_SIZES = (3, 5, 2)
TABLE2_TASKS = {1: (1, 0, 0), 2: (3, 0, 0), 3: (2, 2, 0), 4: (0, 5, 0), 5: (0, 0, 1)}

# printed sample complexities, keyed by (task, algorithm[, merging])
TABLE2_PUBLISHED = {
    (1, "vanilla"): 4588, (1, "butterscotch"): 10370, (1, "lucb"): 3634,
    (2, "vanilla"): 48632, (2, "butterscotch"): 31757, (2, "lucb"): 63802,
    (3, "vanilla"): 8958, (3, "butterscotch"): 10370, (3, "lucb"): 19444,
    (4, "vanilla"): 56730, (4, "butterscotch"): 50142, (4, "lucb"): 61302,
    (5, "vanilla"): 8913, (5, "butterscotch"): 10370, (5, "lucb"): 9257,
}
TABLE3_PUBLISHED = {
    (1, "vanilla", True): 4588, (1, "vanilla", False): 6491,
    (1, "butterscotch", True): 10370, (1, "butterscotch", False): 10370,
    (2, "vanilla", True): 48632, (2, "vanilla", False): 50350,
    (2, "butterscotch", True): 31757, (2, "butterscotch", False): 44358,
    (3, "vanilla", True): 8958, (3, "vanilla", False): 10745,
    (3, "butterscotch", True): 10370, (3, "butterscotch", False): 10370,
    (4, "vanilla", True): 55932, (4, "vanilla", False): 56125,
    (4, "butterscotch", True): 50162, (4, "butterscotch", False): 51002,
    (5, "vanilla", True): 8913, (5, "vanilla", False): 10393,
    (5, "butterscotch", True): 10370, (5, "butterscotch", False): 10370,
}

FIG2_NS = (10, 20, 30, 40, 50)
FIG2_RATIOS = (3, 5, 2)
PRESETS = ("table2", "table3", "movielens-fig2")

CSV_HEADER = (
    "preset,task,c,r,algorithm,merging,delta,replications,mean_pulls,std_pulls,"
    "min_pulls,max_pulls,errors,lower_bound,upper_bound"
)

_TASK_KEYS = ("task", "n", "k", "m", "ratios")


class ConfigError(ValueError):
    """An experiment config that cannot be run."""


@dataclass(frozen=True)
class MovieLensSource:
    ratings_path: str
    raw_max: float = 5.0
    top_n: int = 50


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: an instance, a reward family and an algorithm.

    Means come from ``means`` or ``movielens``.  The cluster structure comes
    from ``cluster_sizes`` + ``required`` or from a ``task`` preset.
    """

    means: tuple[float, ...] | None = None
    cluster_sizes: tuple[int, ...] | None = None
    required: tuple[int, ...] | None = None
    task: str | None = None
    n: int | None = None
    k: int | None = None
    m: int | None = None
    ratios: tuple[int, ...] | None = None
    movielens: MovieLensSource | None = None
    atoms: tuple[tuple[float, ...], ...] | None = None
    family: str = "bernoulli"
    delta: float = 0.01
    replications: int = 100
    seed: int = 0
    algorithm: str = "vanilla"
    merging: bool = True
    pull_budget: int = DEFAULT_BUDGET
    preset: str = "custom"
    label: str = ""

    def __post_init__(self):
        if (self.means is None) == (self.movielens is None):
            raise ConfigError("give exactly one of 'means' or 'movielens'")
        if self.task is None and (self.cluster_sizes is None or self.required is None):
            raise ConfigError("give 'cluster_sizes' and 'required', or a 'task' preset")
        if self.task is not None and (self.cluster_sizes is not None or self.required is not None):
            raise ConfigError("'task' and explicit 'cluster_sizes'/'required' are exclusive")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.movielens is not None and self.family != "empirical":
            raise ConfigError("movielens instances use the 'empirical' family")
        if self.family == "empirical" and self.movielens is None and self.atoms is None:
            raise ConfigError("the empirical family needs 'atoms' or a 'movielens' block")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError(f"delta must lie in (0, 1), got {self.delta}")
        if self.replications < 1:
            raise ConfigError(f"replications must be >= 1, got {self.replications}")
        if self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        if self.pull_budget < 1:
            raise ConfigError("pull_budget must be positive")

    @property
    def uses_merging(self) -> bool:
        # the LUCB baseline has no merging step
        return self.merging and self.algorithm != "lucb"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        data = dict(data)
        params = data.pop("params", None)
        if params is not None:
            # {"task": ..., "params": {"n": .., "k": .., "m": .., "ratios": ..}}
            if not isinstance(params, dict) or set(params) - set(_TASK_KEYS[1:]):
                raise ConfigError(f"'params' takes only {list(_TASK_KEYS[1:])}, got {params}")
            clash = set(params) & set(data)
            if clash:
                raise ConfigError(f"{sorted(clash)} given both inside and outside 'params'")
            data.update(params)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            if data.get("movielens") is not None:
                ml = data["movielens"]
                if not isinstance(ml, dict):
                    raise ConfigError("'movielens' must be an object")
                data["movielens"] = MovieLensSource(**ml)
                data.setdefault("family", "empirical")
            if isinstance(data.get("ratios"), str):
                data["ratios"] = [int(x) for x in data["ratios"].split(":")]
            for key in ("means", "cluster_sizes", "required", "ratios"):
                if data.get(key) is not None:
                    data[key] = tuple(data[key])
            if data.get("atoms") is not None:
                data["atoms"] = tuple(tuple(a) for a in data["atoms"])
            return cls(**data)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in out.items() if v is not None}

    def resolve(self) -> tuple[Instance, Environment]:
        """Build the ground-truth instance and its reward environment."""
        try:
            if self.movielens is not None:
                ml = self.movielens
                items = top_items(parse_ratings(ml.ratings_path, ml.raw_max), ml.top_n)
                sizes, req = self._structure(len(items))
                return build_movielens_instance(items, sizes, req)
            sizes, req = self._structure(len(self.means))
            instance = build_instance(self.means, sizes, req)
            return instance, make_environment(instance, self.family, self.atoms)
        except (InstanceError, RewardModelError) as exc:
            raise ConfigError(str(exc)) from exc

    def _structure(self, n_arms: int) -> tuple[ClusterSpec, RequirementSpec]:
        if self.task is None:
            return ClusterSpec(self.cluster_sizes), RequirementSpec(self.required)
        n = self.n if self.n is not None else n_arms
        if n != n_arms:
            raise ConfigError(f"task n={n} but the instance has {n_arms} arms")
        return task_preset(self.task, n, self.k, self.m, self.ratios)


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    ml = data.get("movielens")
    if isinstance(ml, dict) and "ratings_path" in ml:
        # relative ratings paths are relative to the config file
        ratings = Path(ml["ratings_path"])
        if not ratings.is_absolute():
            data["movielens"] = {**ml, "ratings_path": str(path.parent / ratings)}
    return ExperimentConfig.from_dict(data)


@dataclass(frozen=True)
class RunRecord:
    replication: int
    outputs: tuple[tuple[int, ...], ...]  # global arm indices
    total_pulls: int
    pulls: tuple[int, ...]  # global arm order
    rounds: int
    terminated: bool
    correct: bool
    wall_time: float
    aborted: str = ""


@dataclass(frozen=True)
class Summary:
    preset: str
    task: str
    sizes: tuple[int, ...]
    required: tuple[int, ...]
    algorithm: str
    merging: bool
    delta: float
    replications: int
    mean: float
    std: float
    min: int
    max: int
    errors: int
    aborted: int
    lower_bound: float
    vanilla_upper: float
    butterscotch_upper: float
    totals: tuple[int, ...] = field(default=(), repr=False)

    @property
    def error_rate(self) -> float:
        return self.errors / self.replications

    @property
    def stderr(self) -> float:
        n = len(self.totals)
        return self.std / math.sqrt(n) if n > 1 else 0.0

    @property
    def upper_bound(self) -> float | None:
        """Upper bound of this row's algorithm; LUCB has no closed form."""
        return {"vanilla": self.vanilla_upper, "butterscotch": self.butterscotch_upper}.get(
            self.algorithm
        )

    def csv_row(self) -> list[str]:
        ub = self.upper_bound
        return [
            self.preset,
            self.task,
            ":".join(map(str, self.sizes)),
            ":".join(map(str, self.required)),
            self.algorithm,
            str(self.merging).lower(),
            repr(self.delta),
            str(self.replications),
            f"{self.mean:.4f}",
            f"{self.std:.4f}",
            str(self.min),
            str(self.max),
            str(self.errors),
            f"{self.lower_bound:.4f}",
            "" if ub is None else f"{ub:.4f}",
        ]


def verify_output(result: RunResult, instance: Instance) -> bool:
    """True iff every output arm's true mean lies in its assigned cluster's range.

    ``result`` must be expressed in global arm indices.
    """
    if not result.terminated or len(result.outputs) != instance.n_clusters:
        return False
    flat = instance.flat_means
    for i, arms in enumerate(result.outputs):
        lo, hi = min(instance.means[i]), max(instance.means[i])
        for arm in arms:
            if not 0 <= arm < len(flat) or not lo <= flat[arm] <= hi:
                return False
    return True


def row_key(instance: Instance, family: str) -> int:
    """Stable seed key of an instance, shared by every algorithm run on it."""
    blob = json.dumps(
        {"means": [repr(x) for x in instance.flat_means], "c": instance.sizes,
         "r": instance.required, "family": family},
        sort_keys=True,
    )
    return int.from_bytes(hashlib.blake2b(blob.encode(), digest_size=8).digest(), "big")


def run_algorithm(
    name: str,
    sizes: Sequence[int],
    required: Sequence[int],
    oracle: RewardOracle,
    delta: float,
    merging: bool = True,
) -> RunResult:
    if name == "vanilla":
        return run_vanilla(sizes, required, oracle, delta, merging)
    if name == "butterscotch":
        return run_butterscotch(sizes, required, oracle, delta, merging)
    if name == "lucb":
        return run_lucb(sizes, required, oracle, delta)
    raise ConfigError(f"unknown algorithm {name!r}")


def _to_global(result: RunResult, oracle: RewardOracle) -> RunResult:
    pulls = [0] * len(result.pulls)
    for label, count in enumerate(result.pulls):
        pulls[oracle.to_global(label)] = count
    return replace(
        result,
        outputs=tuple(tuple(sorted(oracle.to_global(a) for a in o)) for o in result.outputs),
        pulls=tuple(pulls),
        discarded=tuple(sorted(oracle.to_global(a) for a in result.discarded)),
    )


def run_replication(
    config: ExperimentConfig,
    instance: Instance,
    env: Environment,
    replication: int,
    row: int | None = None,
) -> RunRecord:
    row = row_key(instance, env.family) if row is None else row
    oracle = RewardOracle.seeded(env, SeedPolicy(config.seed), row, replication, config.pull_budget)
    start = time.perf_counter()
    try:
        raw = run_algorithm(
            config.algorithm, instance.sizes, instance.required, oracle,
            config.delta, config.uses_merging,
        )
    except BudgetExceeded as exc:
        return RunRecord(
            replication, (), exc.total, (), exc.rounds or 0, False, False,
            time.perf_counter() - start, str(exc),
        )
    result = _to_global(raw, oracle)
    return RunRecord(
        replication,
        result.outputs,
        result.total_pulls,
        result.pulls,
        result.rounds,
        result.terminated,
        verify_output(result, instance),
        time.perf_counter() - start,
    )


def summarize(config: ExperimentConfig, instance: Instance, records: Sequence[RunRecord]) -> Summary:
    done = [r for r in records if not r.aborted]
    aborted = len(records) - len(done)
    if aborted:
        log.warning(
            "%d of %d replications hit the pull budget of %d and are left out of the mean",
            aborted, len(records), config.pull_budget,
        )
    totals = np.array([r.total_pulls for r in done], dtype=np.float64)
    mean = float(totals.mean()) if len(totals) else math.nan
    std = float(totals.std(ddof=1)) if len(totals) > 1 else 0.0
    return Summary(
        preset=config.preset,
        task=config.label or config.task or "custom",
        sizes=instance.sizes,
        required=instance.required,
        algorithm=config.algorithm,
        merging=config.uses_merging,
        delta=config.delta,
        replications=len(records),
        mean=mean,
        std=std,
        min=int(totals.min()) if len(totals) else 0,
        max=int(totals.max()) if len(totals) else 0,
        errors=sum(1 for r in done if not r.correct),
        aborted=aborted,
        lower_bound=lower_bound(instance, config.delta),
        vanilla_upper=vanilla_upper_bound(instance, config.delta),
        butterscotch_upper=butterscotch_upper_bound(instance, config.delta),
        totals=tuple(int(t) for t in totals),
    )


def run_experiment(
    config: ExperimentConfig,
    on_record: Callable[[RunRecord], None] | None = None,
) -> tuple[Summary, list[RunRecord]]:
    instance, env = config.resolve()
    row = row_key(instance, env.family)
    records = []
    for rep in range(config.replications):
        rec = run_replication(config, instance, env, rep, row)
        records.append(rec)
        if on_record is not None:
            on_record(rec)
    return summarize(config, instance, records), records


def write_csv(summaries: Iterable[Summary], out: io.TextIOBase | str | Path) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            write_csv(summaries, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for s in summaries:
        writer.writerow(s.csv_row())


def synthetic_config(task: int, algorithm: str, **overrides: Any) -> ExperimentConfig:
    """Config for one Table 2 task on the synthetic ten-arm instance."""
    base = dict(
        means=SYNTHETIC_MEANS,
        cluster_sizes=SYNTHETIC_SIZES,
        required=TABLE2_TASKS[task],
        family="bernoulli",
        algorithm=algorithm,
        label=f"task{task}",
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def preset_configs(
    preset: str,
    replications: int = 100,
    seed: int = 0,
    delta: float = 0.01,
    ratings: str | Path | None = None,
    ns: Sequence[int] | None = None,
    raw_max: float = 5.0,
) -> list[ExperimentConfig]:
    common = dict(replications=replications, seed=seed, delta=delta, preset=preset)
    if preset == "table2":
        return [
            synthetic_config(t, alg, **common)
            for t in TABLE2_TASKS for alg in ALGORITHMS
        ]
    if preset == "table3":
        return [
            synthetic_config(t, alg, merging=merging, **common)
            for t in TABLE2_TASKS for alg in ("vanilla", "butterscotch")
            for merging in (True, False)
        ]
    if preset == "movielens-fig2":
        if ratings is None:
            raise ConfigError("movielens-fig2 needs a ratings file (--ratings)")
        configs = []
        for n in ns or FIG2_NS:
            source = MovieLensSource(str(ratings), raw_max, n)
            params = dict(k=n // 2, m=max(1, n // 5), ratios=FIG2_RATIOS)
            for task in TASKS:
                for alg in ALGORITHMS:
                    configs.append(ExperimentConfig(
                        movielens=source, family="empirical", task=task, n=n,
                        algorithm=alg, label=f"{task}@N={n}", **params, **common,
                    ))
        return configs
    raise ConfigError(f"unknown preset {preset!r}; expected one of {PRESETS}")


@dataclass
class Reproduction:
    summaries: list[Summary]
    csv_path: Path | None
    manifest_path: Path | None


def reproduce(
    preset: str,
    replications: int = 100,
    seed: int = 0,
    out: str | Path | None = None,
    ratings: str | Path | None = None,
    ns: Sequence[int] | None = None,
    delta: float = 0.01,
    progress: Callable[[Summary], None] | None = None,
) -> Reproduction:
    """Run every row of a preset; write ``<preset>.csv`` and a JSON manifest into ``out``."""
    configs = preset_configs(preset, replications, seed, delta, ratings, ns)
    summaries, rows = [], []
    cache: dict[Any, tuple[Instance, Environment]] = {}
    for config in configs:
        # one parse per ratings file and N, not one per row
        key = (config.movielens, config.task, config.required, config.n)
        if key not in cache:
            cache[key] = config.resolve()
        instance, env = cache[key]
        row = row_key(instance, env.family)
        records = [run_replication(config, instance, env, rep, row) for rep in range(replications)]
        summary = summarize(config, instance, records)
        summaries.append(summary)
        rows.append({"row": row, "config": config.to_dict()})
        if progress is not None:
            progress(summary)
    csv_path = manifest_path = None
    if out is not None:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / f"{preset}.csv"
        write_csv(summaries, csv_path)
        manifest_path = out / f"{preset}_manifest.json"
        manifest = {"preset": preset, "seed": seed, "replications": replications,
                    "delta": delta, "rows": rows}
        manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return Reproduction(summaries, csv_path, manifest_path)
