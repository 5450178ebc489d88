"""RAI instances, arm/bottleneck gaps and closed-form sample-complexity bounds.

Indices are 0-based throughout: cluster ``i`` in ``range(m)`` and arm ``j`` in
``range(c_i)``.  A flat "global" arm index is the arm's position in the
instance's non-increasing mean order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

INF = math.inf

TASKS = (
    "best-arm",
    "one-of-top-k",
    "top-k",
    "m-of-top-k",
    "coarse-ranking",
    "full-ranking",
)


class InstanceError(ValueError):
    """Raised for malformed cluster sizes, requirements or means."""


@dataclass(frozen=True)
class ClusterSpec:
    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(c) for c in self.sizes)
        if not sizes:
            raise InstanceError("at least one cluster is required")
        if any(c < 1 for c in sizes):
            raise InstanceError(f"cluster sizes must be >= 1, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def n_clusters(self) -> int:
        return len(self.sizes)

    @property
    def n_arms(self) -> int:
        return sum(self.sizes)

    def offsets(self) -> list[int]:
        """Global index of the first arm of every cluster."""
        out, start = [], 0
        for c in self.sizes:
            out.append(start)
            start += c
        return out

    def cluster_of(self, arm: int) -> int:
        if not 0 <= arm < self.n_arms:
            raise IndexError(f"arm {arm} out of range for {self.n_arms} arms")
        for i, start in enumerate(self.offsets()):
            if arm < start + self.sizes[i]:
                return i
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class RequirementSpec:
    required: tuple[int, ...]

    def __post_init__(self):
        required = tuple(int(r) for r in self.required)
        if any(r < 0 for r in required):
            raise InstanceError(f"requirements must be >= 0, got {required}")
        object.__setattr__(self, "required", required)

    def check_against(self, clusters: ClusterSpec) -> None:
        if len(self.required) != clusters.n_clusters:
            raise InstanceError(
                f"{len(self.required)} requirements for {clusters.n_clusters} clusters"
            )
        for i, (r, c) in enumerate(zip(self.required, clusters.sizes)):
            if r > c:
                raise InstanceError(f"cluster {i}: requires {r} arms but has only {c}")


@dataclass(frozen=True)
class Instance:
    clusters: ClusterSpec
    requirements: RequirementSpec
    means: tuple[tuple[float, ...], ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.clusters.sizes

    @property
    def required(self) -> tuple[int, ...]:
        return self.requirements.required

    @property
    def n_arms(self) -> int:
        return self.clusters.n_arms

    @property
    def n_clusters(self) -> int:
        return self.clusters.n_clusters

    @property
    def flat_means(self) -> tuple[float, ...]:
        return tuple(mu for block in self.means for mu in block)

    def cluster_of(self, arm: int) -> int:
        return self.clusters.cluster_of(arm)


@dataclass(frozen=True)
class GapReport:
    arm_gaps: tuple[tuple[float, ...], ...]
    cluster_bottlenecks: tuple[float, ...]
    bottleneck: float

    @property
    def flat_gaps(self) -> tuple[float, ...]:
        return tuple(g for block in self.arm_gaps for g in block)


def build_instance(
    means: Sequence[float],
    sizes: ClusterSpec | Sequence[int],
    required: RequirementSpec | Sequence[int],
) -> Instance:
    """Slice a non-increasing list of means into clusters and validate it."""
    clusters = sizes if isinstance(sizes, ClusterSpec) else ClusterSpec(tuple(sizes))
    reqs = required if isinstance(required, RequirementSpec) else RequirementSpec(tuple(required))
    reqs.check_against(clusters)
    means = [float(mu) for mu in means]
    if len(means) != clusters.n_arms:
        raise InstanceError(f"{len(means)} means for {clusters.n_arms} arms")
    if any(math.isnan(mu) or math.isinf(mu) for mu in means):
        raise InstanceError("means must be finite")
    for k in range(len(means) - 1):
        if means[k] < means[k + 1]:
            raise InstanceError(
                f"means must be non-increasing: position {k} ({means[k]}) < {k + 1} ({means[k + 1]})"
            )
    blocks = []
    for i, start in enumerate(clusters.offsets()):
        stop = start + clusters.sizes[i]
        if i > 0 and not means[start - 1] > means[start]:
            raise InstanceError(
                f"clusters {i - 1} and {i} are not separated: "
                f"arm {start - 1} and arm {start} both have mean {means[start]}"
            )
        blocks.append(tuple(means[start:stop]))
    return Instance(clusters, reqs, tuple(blocks))


def arm_gap(instance: Instance, i: int, j: int) -> float:
    """Distance from arm ``j`` of cluster ``i`` to the nearest arm of a neighbouring cluster."""
    m = instance.n_clusters
    if not 0 <= i < m:
        raise IndexError(f"cluster {i} out of range")
    if not 0 <= j < instance.sizes[i]:
        raise IndexError(f"arm {j} out of range for cluster {i}")
    mu = instance.means[i][j]
    above = instance.means[i - 1][-1] if i > 0 else INF
    below = instance.means[i + 1][0] if i < m - 1 else -INF
    return min(above - mu, mu - below)


def _kth_largest(values: Sequence[float], k: int) -> float:
    # stable sort on -value keeps ascending arm index among ties
    order = sorted(range(len(values)), key=lambda a: -values[a])
    return values[order[k - 1]]


def gap_report(instance: Instance) -> GapReport:
    gaps = tuple(
        tuple(arm_gap(instance, i, j) for j in range(c))
        for i, c in enumerate(instance.sizes)
    )
    bottlenecks = tuple(
        INF if r == 0 else _kth_largest(gaps[i], r)
        for i, r in enumerate(instance.required)
    )
    return GapReport(gaps, bottlenecks, min(bottlenecks))


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")


def lower_bound(instance: Instance, delta: float) -> float:
    """Asymptotic expected-pull floor ln(1/delta) / (2 * bottleneck^2) for Gaussian(sigma=1/2) arms."""
    _check_delta(delta)
    gap = gap_report(instance).bottleneck
    if gap == INF:
        return 0.0
    return math.log(1.0 / delta) / (2.0 * gap * gap)


def _per_arm_gaps(instance: Instance) -> tuple[list[float], float]:
    report = gap_report(instance)
    bottleneck = report.bottleneck
    # arms easier than the bottleneck are charged at their own gap, the rest at the bottleneck
    return [g if g >= bottleneck else bottleneck for g in report.flat_gaps], bottleneck


def vanilla_upper_bound(instance: Instance, delta: float) -> float:
    _check_delta(delta)
    gaps, bottleneck = _per_arm_gaps(instance)
    if bottleneck == INF:
        return 0.0
    n = instance.n_arms
    scale = 16.0 * math.pi * math.sqrt(n / (3.0 * delta))
    return sum(26.0 / g**2 * math.log(scale / g**2) + 1.0 for g in gaps)


def butterscotch_round(gap: float) -> int:
    """Round by which a gap is resolved, clamped to the first round."""
    return max(1, math.ceil(math.log2(1.0 / (2.0 * gap))))


def butterscotch_upper_bound(instance: Instance, delta: float) -> float:
    _check_delta(delta)
    gaps, bottleneck = _per_arm_gaps(instance)
    if bottleneck == INF:
        return 0.0
    base = instance.n_arms * math.pi**2 / (3.0 * delta)
    floor = 128.0 * math.log(base)
    total = 0.0
    for g in gaps:
        rounds = butterscotch_round(g)
        total += max(32.0 / g**2 * math.log(base * rounds**2), floor)
    return total


def _scaled_ratios(n: int, ratios: Sequence[int]) -> tuple[int, ...]:
    ratios = [int(x) for x in ratios]
    if not ratios or any(x < 1 for x in ratios):
        raise InstanceError(f"ratios must be positive integers, got {ratios}")
    total = sum(ratios)
    if n % total:
        raise InstanceError(f"ratios {ratios} do not divide N={n} into whole clusters")
    return tuple(x * (n // total) for x in ratios)


def task_preset(
    task: str,
    n: int,
    k: int | None = None,
    m: int | None = None,
    ratios: Sequence[int] | None = None,
) -> tuple[ClusterSpec, RequirementSpec]:
    """(cluster sizes, requirements) for the classical special cases of RAI."""
    task = task.lower()
    if task not in TASKS:
        raise InstanceError(f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    if n < 1:
        raise InstanceError(f"N must be >= 1, got {n}")
    if task in ("one-of-top-k", "top-k", "m-of-top-k"):
        if k is None or not 1 <= k < n:
            raise InstanceError(f"{task} needs 1 <= K < N, got K={k}, N={n}")
    if task == "best-arm":
        if n < 2:
            raise InstanceError("best-arm needs N >= 2")
        sizes, req = (1, n - 1), (1, 0)
    elif task == "one-of-top-k":
        sizes, req = (k, n - k), (1, 0)
    elif task == "top-k":
        sizes, req = (k, n - k), (k, 0)
    elif task == "m-of-top-k":
        if m is None or not 1 <= m <= k:
            raise InstanceError(f"m-of-top-k needs 1 <= M <= K, got M={m}, K={k}")
        sizes, req = (k, n - k), (m, 0)
    elif task == "coarse-ranking":
        if ratios is None:
            raise InstanceError("coarse-ranking needs cluster ratios")
        sizes = _scaled_ratios(n, ratios)
        req = sizes
    else:
        sizes = req = (1,) * n
    return ClusterSpec(sizes), RequirementSpec(req)
