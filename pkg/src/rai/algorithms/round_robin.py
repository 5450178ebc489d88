"""Round-robin elimination: the Vanilla (one pull per round) and Butterscotch
(geometrically growing batches) procedures."""

from __future__ import annotations

from typing import Callable, Sequence

from ..environments import BudgetExceeded, RewardOracle
from .core import (
    AlgorithmState,
    RunResult,
    butterscotch_margin,
    butterscotch_schedule,
    finalize_arm,
    membership_check,
    merge_satisfied,
    partition_active,
    to_result,
    vanilla_radius,
)

Observer = Callable[[AlgorithmState], None]


def _run(
    sizes: Sequence[int],
    required: Sequence[int],
    oracle: RewardOracle,
    merging: bool,
    batch: Callable[[int], int],
    margin: Callable[[int], float],
    observer: Observer | None,
) -> RunResult:
    state = AlgorithmState.start(sizes, required)
    if oracle.n_arms != state.n_arms:
        raise ValueError(f"oracle has {oracle.n_arms} arms, instance has {state.n_arms}")
    try:
        while not state.done():
            state.round += 1
            times = batch(state.round)
            for arm in state.active:
                if times == 1:
                    state.record(arm, oracle.pull(arm))
                else:
                    state.record(arm, oracle.pull_sum(arm, times), times)
            part = partition_active(state)
            eps = margin(state.round)
            for i, block in enumerate(part.blocks):
                for arm in list(block):
                    if membership_check(part, i, arm, eps, state.residual):
                        finalize_arm(state, arm, i)
                        block.remove(arm)
                if merging:
                    merge_satisfied(state, i)
            if observer is not None:
                observer(state)
    except BudgetExceeded as exc:
        exc.rounds = state.round
        raise
    return to_result(state)


def run_vanilla(
    sizes: Sequence[int],
    required: Sequence[int],
    oracle: RewardOracle,
    delta: float,
    merging: bool = True,
    observer: Observer | None = None,
) -> RunResult:
    n = sum(sizes)
    return _run(
        sizes, required, oracle, merging,
        batch=lambda r: 1,
        margin=lambda r: 2.0 * vanilla_radius(r, n, delta),
        observer=observer,
    )


def run_butterscotch(
    sizes: Sequence[int],
    required: Sequence[int],
    oracle: RewardOracle,
    delta: float,
    merging: bool = True,
    observer: Observer | None = None,
) -> RunResult:
    n = sum(sizes)
    return _run(
        sizes, required, oracle, merging,
        batch=lambda r: butterscotch_schedule(r, n, delta) - butterscotch_schedule(r - 1, n, delta),
        margin=butterscotch_margin,
        observer=observer,
    )
