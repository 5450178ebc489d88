"""Shared state and building blocks of the round-based RAI procedures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

INF = math.inf


@dataclass
class AlgorithmState:
    """Mutable bookkeeping for one run.  Arm ids are the oracle's labels."""

    sizes: tuple[int, ...]
    required: tuple[int, ...]
    active: list[int]
    pulls: list[int]
    sums: list[float]
    residual: list[int]
    outputs: list[list[int]]
    discarded: list[int] = field(default_factory=list)
    round: int = 0
    total_pulls: int = 0

    @classmethod
    def start(cls, sizes: Sequence[int], required: Sequence[int]) -> "AlgorithmState":
        sizes, required = tuple(sizes), tuple(required)
        if len(sizes) != len(required):
            raise ValueError("sizes and requirements differ in length")
        if any(r < 0 or r > c for r, c in zip(required, sizes)):
            raise ValueError(f"requirements {required} incompatible with sizes {sizes}")
        n = sum(sizes)
        return cls(
            sizes=sizes,
            required=required,
            active=list(range(n)),
            pulls=[0] * n,
            sums=[0.0] * n,
            residual=list(sizes),
            outputs=[[] for _ in sizes],
        )

    @property
    def n_arms(self) -> int:
        return len(self.pulls)

    def mean(self, arm: int) -> float:
        return self.sums[arm] / self.pulls[arm]

    def record(self, arm: int, reward_sum: float, times: int = 1) -> None:
        self.sums[arm] += reward_sum
        self.pulls[arm] += times
        self.total_pulls += times

    def satisfied(self, i: int) -> bool:
        return len(self.outputs[i]) == self.required[i]

    def done(self) -> bool:
        return all(len(o) == r for o, r in zip(self.outputs, self.required))


@dataclass
class EmpiricalPartition:
    """Active arms sorted by empirical mean and cut into blocks of the residual sizes."""

    blocks: list[list[int]]
    means: dict[int, float]

    def flat(self) -> list[int]:
        return [a for block in self.blocks for a in block]

    def block_of(self, arm: int) -> int:
        for i, block in enumerate(self.blocks):
            if arm in block:
                return i
        raise KeyError(arm)

    def remove(self, arm: int) -> None:
        self.blocks[self.block_of(arm)].remove(arm)

    def neighbour_above(self, i: int) -> list[int] | None:
        """Nearest non-empty block before ``i``; None stands for the dummy top cluster."""
        for k in range(i - 1, -1, -1):
            if self.blocks[k]:
                return self.blocks[k]
        return None

    def neighbour_below(self, i: int) -> list[int] | None:
        for k in range(i + 1, len(self.blocks)):
            if self.blocks[k]:
                return self.blocks[k]
        return None


@dataclass(frozen=True)
class RunResult:
    outputs: tuple[tuple[int, ...], ...]
    total_pulls: int
    pulls: tuple[int, ...]
    rounds: int
    terminated: bool
    discarded: tuple[int, ...] = ()


def partition_active(state: AlgorithmState) -> EmpiricalPartition:
    if sum(state.residual) != len(state.active):
        raise ValueError(
            f"residual sizes {state.residual} do not add up to {len(state.active)} active arms"
        )
    means = {a: state.mean(a) for a in state.active}
    # descending empirical mean, ties by ascending arm id
    order = sorted(state.active, key=lambda a: (-means[a], a))
    blocks, start = [], 0
    for size in state.residual:
        blocks.append(order[start:start + size])
        start += size
    return EmpiricalPartition(blocks, means)


def membership_check(
    partition: EmpiricalPartition,
    i: int,
    arm: int,
    margin: float,
    residual: Sequence[int],
) -> bool:
    """Can ``arm`` (in block ``i``) be confirmed as a member of cluster ``i``?

    It must beat, by more than ``margin``, at least as many arms of the later
    blocks as the residual sizes of the later clusters, and trail at least as
    many arms of the earlier blocks.
    """
    means = partition.means
    mu = means[arm]
    need_above = sum(residual[:i])
    if need_above:
        better = sum(
            1 for block in partition.blocks[:i] for b in block if means[b] - mu > margin
        )
        if better < need_above:
            return False
    need_below = sum(residual[i + 1:])
    if need_below:
        worse = sum(
            1 for block in partition.blocks[i + 1:] for b in block if mu - means[b] > margin
        )
        if worse < need_below:
            return False
    return True


def finalize_arm(state: AlgorithmState, arm: int, i: int) -> bool:
    """Retire ``arm`` as a cluster-``i`` member; True when it was kept as an output."""
    kept = len(state.outputs[i]) < state.required[i]
    if kept:
        state.outputs[i].append(arm)
    else:
        state.discarded.append(arm)
    state.active.remove(arm)
    state.residual[i] -= 1
    return kept


def merge_satisfied(state: AlgorithmState, i: int) -> bool:
    """Fold cluster ``i-1`` into ``i`` once both have all their representatives."""
    if i < 1 or not (state.satisfied(i - 1) and state.satisfied(i)):
        return False
    state.residual[i] += state.residual[i - 1]
    state.residual[i - 1] = 0
    return True


def _check(delta: float, rounds: int) -> None:
    if rounds < 1:
        raise ValueError(f"round index must be >= 1, got {rounds}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")


def vanilla_radius(rounds: int, n_arms: int, delta: float) -> float:
    """Confidence radius after ``rounds`` pulls of every active arm."""
    _check(delta, rounds)
    return math.sqrt(math.log(math.pi**2 * rounds**2 * n_arms / (3.0 * delta)) / (2.0 * rounds))


def butterscotch_schedule(rounds: int, n_arms: int, delta: float) -> int:
    """Cumulative per-arm pulls at the end of a batched round; round 0 is 0."""
    if rounds == 0:
        return 0
    _check(delta, rounds)
    t = 2.0 ** (2 * rounds + 5) * math.log(math.pi**2 * rounds**2 * n_arms / (3.0 * delta))
    return math.ceil(t)


def butterscotch_margin(rounds: int) -> float:
    return 2.0 ** -(rounds + 2)


def lucb_radius(rounds: int, arm_pulls: int, n_arms: int, delta: float) -> float:
    _check(delta, rounds)
    if arm_pulls < 1:
        raise ValueError("an arm needs at least one pull for a confidence bound")
    return math.sqrt(math.log(math.pi**2 * rounds**3 * n_arms / (3.0 * delta)) / (2.0 * arm_pulls))


def lucb_bounds(
    rounds: int, arm_pulls: int, n_arms: int, delta: float, mean: float
) -> tuple[float, float]:
    """(LCB, UCB) of an arm with empirical mean ``mean``."""
    radius = lucb_radius(rounds, arm_pulls, n_arms, delta)
    return mean - radius, mean + radius


def lucb_empirical_gap(
    lcb: float, ucb: float, lcb_above: float = INF, ucb_below: float = -INF
) -> float:
    """Overlap of an arm's interval with its neighbouring blocks.

    ``lcb_above`` is the lowest LCB in the block above (``+inf`` for the dummy
    top cluster) and ``ucb_below`` the highest UCB in the block below
    (``-inf`` for the dummy bottom cluster).
    """
    return max(ucb - lcb_above, ucb_below - lcb)


def to_result(state: AlgorithmState, terminated: bool = True) -> RunResult:
    return RunResult(
        outputs=tuple(tuple(o) for o in state.outputs),
        total_pulls=state.total_pulls,
        pulls=tuple(state.pulls),
        rounds=state.round,
        terminated=terminated,
        discarded=tuple(state.discarded),
    )
