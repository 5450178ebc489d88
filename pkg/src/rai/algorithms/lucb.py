"""LUCB-style sampling for RAI: pull only the arms that block a decision.

An active arm in block ``i`` is confirmed once its confidence interval lies
strictly below every interval of the earlier blocks and strictly above every
interval of the later blocks.  For every cluster still short of
representatives the round samples

* the block-``i`` arm with the smallest empirical gap (closest to confirmation),
* the arm holding the lowest LCB above block ``i`` and the arm holding the
  highest UCB below it (the arms obstructing that confirmation),
* the weakest and strongest members of block ``i`` itself, so an arm that got
  lucky early cannot squat in a block without ever being resampled.

``neighbour_only=True`` runs the narrower rule instead: intervals are
compared with the nearest non-empty block on each side only, and only the
arms of the first two bullets are pulled.  It is kept for comparison.  It is
not delta-PC, since an upper-cluster arm that lands in a far block is never
sampled again.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from ..environments import BudgetExceeded, RewardOracle
from .core import (
    INF,
    AlgorithmState,
    RunResult,
    finalize_arm,
    lucb_empirical_gap,
    partition_active,
    to_result,
)


def run_lucb(
    sizes: Sequence[int],
    required: Sequence[int],
    oracle: RewardOracle,
    delta: float,
    observer: Callable[[AlgorithmState], None] | None = None,
    neighbour_only: bool = False,
) -> RunResult:
    state = AlgorithmState.start(sizes, required)
    n = state.n_arms
    if oracle.n_arms != n:
        raise ValueError(f"oracle has {oracle.n_arms} arms, instance has {n}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    scale = math.pi**2 * n / (3.0 * delta)
    pulls, sums = state.pulls, state.sums
    lcb: dict[int, float] = {}
    ucb: dict[int, float] = {}

    def refresh(arm: int, log_term: float) -> None:
        # same interval as lucb_bounds, with the round's log term hoisted
        mu = sums[arm] / pulls[arm]
        radius = math.sqrt(log_term / (2.0 * pulls[arm]))
        lcb[arm] = mu - radius
        ucb[arm] = mu + radius

    try:
        for arm in range(n):
            state.record(arm, oracle.pull(arm))
        while not state.done():
            state.round += 1
            log_term = math.log(scale * state.round**3)
            for arm in state.active:
                refresh(arm, log_term)
            part = partition_active(state)
            blocks = part.blocks
            for i, block in enumerate(blocks):
                if neighbour_only:
                    above = part.neighbour_above(i) or []
                    below = part.neighbour_below(i) or []
                else:
                    above = [a for b in blocks[:i] for a in b]
                    below = [a for b in blocks[i + 1:] for a in b]
                lo_above = min((lcb[a] for a in above), default=INF)
                hi_below = max((ucb[a] for a in below), default=-INF)
                if neighbour_only:
                    # empirically worst arm above, empirically best arm below
                    lo_sep = lcb[above[-1]] if above else INF
                    hi_sep = ucb[below[0]] if below else -INF
                else:
                    lo_sep, hi_sep = lo_above, hi_below
                for arm in list(block):
                    if ucb[arm] < lo_sep and lcb[arm] > hi_sep:
                        finalize_arm(state, arm, i)
                        block.remove(arm)
                if state.satisfied(i) or not block:
                    continue
                gaps = [lucb_empirical_gap(lcb[a], ucb[a], lo_above, hi_below) for a in block]
                chosen = [block[gaps.index(min(gaps))]]
                if above:
                    chosen.append(min(above, key=lcb.__getitem__))
                if below:
                    chosen.append(max(below, key=ucb.__getitem__))
                if not neighbour_only:
                    if above:
                        chosen.append(max(block, key=ucb.__getitem__))
                    if below:
                        chosen.append(min(block, key=lcb.__getitem__))
                for arm in dict.fromkeys(chosen):
                    state.record(arm, oracle.pull(arm))
                    refresh(arm, log_term)
            if observer is not None:
                observer(state)
    except BudgetExceeded as exc:
        exc.rounds = state.round
        raise
    return to_result(state)
