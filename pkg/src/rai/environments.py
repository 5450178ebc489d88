"""Seeded reward samplers for 1/2-subGaussian arms.

Every (replication, arm) pair owns an independent random stream derived from
the master seed, so the rewards an arm produces never depend on the order in
which an algorithm pulls arms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .instance import Instance

FAMILIES = ("bernoulli", "gaussian-half", "empirical")
GAUSSIAN_SD = 0.5
DEFAULT_BUDGET = 10**9


class RewardModelError(ValueError):
    """Raised for invalid reward-family parameters."""


class BudgetExceeded(RuntimeError):
    """A run exceeded its total pull budget."""

    def __init__(self, budget: int, total: int, rounds: int | None = None):
        self.budget = budget
        self.total = total
        self.rounds = rounds
        msg = f"pull budget of {budget} exceeded after {total} pulls"
        if rounds is not None:
            msg += f" (round {rounds})"
        super().__init__(msg)


@dataclass(frozen=True, eq=False)
class ArmSampler:
    family: str
    mean: float
    atoms: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise RewardModelError(f"unknown reward family {self.family!r}")
        if self.family == "empirical":
            if self.atoms is None or len(self.atoms) == 0:
                raise RewardModelError("empirical arm needs a non-empty rating multiset")
            atoms = np.asarray(self.atoms, dtype=np.float64)
            if atoms.min() < 0.0 or atoms.max() > 1.0:
                raise RewardModelError("empirical ratings must lie in [0, 1]")
            object.__setattr__(self, "atoms", atoms)
        elif self.family == "bernoulli" and not 0.0 <= self.mean <= 1.0:
            raise RewardModelError(f"Bernoulli mean {self.mean} outside [0, 1]")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.family == "bernoulli":
            return (rng.random(size) < self.mean).astype(np.float64)
        if self.family == "gaussian-half":
            return self.mean + GAUSSIAN_SD * rng.standard_normal(size)
        n = len(self.atoms)
        # floor(u * n) instead of rng.integers keeps draws chunk-size invariant
        idx = np.minimum((rng.random(size) * n).astype(np.int64), n - 1)
        return self.atoms[idx]


@dataclass(frozen=True)
class Environment:
    arms: tuple[ArmSampler, ...]
    family: str

    @property
    def n_arms(self) -> int:
        return len(self.arms)

    @property
    def means(self) -> tuple[float, ...]:
        return tuple(a.mean for a in self.arms)


def make_environment(
    instance: Instance,
    family: str,
    data: Sequence[Sequence[float]] | None = None,
) -> Environment:
    """Build one sampler per arm, in the instance's global (sorted) order.

    For the ``empirical`` family, ``data`` holds one rating multiset per arm
    (already normalised to [0, 1]) whose average must match the instance mean.
    """
    if family not in FAMILIES:
        raise RewardModelError(f"unknown reward family {family!r}; expected one of {FAMILIES}")
    means = instance.flat_means
    if family in ("bernoulli", "empirical"):
        for k, mu in enumerate(means):
            if not 0.0 <= mu <= 1.0:
                raise RewardModelError(f"arm {k}: mean {mu} outside [0, 1] for {family} rewards")
    if family != "empirical":
        return Environment(tuple(ArmSampler(family, mu) for mu in means), family)
    if data is None or len(data) != len(means):
        raise RewardModelError("empirical environment needs one rating multiset per arm")
    arms = []
    for k, (mu, atoms) in enumerate(zip(means, data)):
        atoms = np.asarray(atoms, dtype=np.float64)
        if atoms.size == 0:
            raise RewardModelError(f"arm {k}: empty rating multiset")
        if abs(float(atoms.mean()) - mu) > 1e-9:
            raise RewardModelError(
                f"arm {k}: rating average {atoms.mean():.12g} does not match mean {mu:.12g}"
            )
        arms.append(ArmSampler("empirical", float(mu), atoms))
    return Environment(tuple(arms), family)


class ArmStream:
    """Buffered i.i.d. rewards for one arm of one replication."""

    __slots__ = ("sampler", "rng", "chunk", "_buf", "_pos")

    def __init__(self, sampler: ArmSampler, rng: np.random.Generator, chunk: int = 1024):
        self.sampler = sampler
        self.rng = rng
        self.chunk = chunk
        self._buf = np.empty(0)
        self._pos = 0

    def _refill(self, need: int) -> None:
        rest = self._buf[self._pos:]
        fresh = self.sampler.sample(self.rng, max(self.chunk, need - len(rest)))
        self._buf = np.concatenate([rest, fresh]) if len(rest) else fresh
        self._pos = 0

    def next(self) -> float:
        if self._pos >= len(self._buf):
            self._refill(1)
        value = self._buf[self._pos]
        self._pos += 1
        return float(value)

    def take(self, k: int) -> np.ndarray:
        if len(self._buf) - self._pos < k:
            self._refill(k)
        out = self._buf[self._pos:self._pos + k]
        self._pos += k
        return out


@dataclass(frozen=True)
class SeedPolicy:
    """Derives independent streams from ``(master, row, replication, arm)``."""

    master: int

    def generator(self, row: int, replication: int, *key: int) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master, spawn_key=(row, replication, *key))
        return np.random.default_rng(seq)

    def streams(self, env: Environment, row: int, replication: int) -> list[ArmStream]:
        return [
            ArmStream(sampler, self.generator(row, replication, 0, arm))
            for arm, sampler in enumerate(env.arms)
        ]

    def permutation(self, n: int, row: int, replication: int) -> list[int]:
        return [int(x) for x in self.generator(row, replication, 1).permutation(n)]


def pull(env: Environment, arm: int, stream: ArmStream) -> float:
    """One reward from ``arm``; ``stream`` must be that arm's stream."""
    if not 0 <= arm < env.n_arms:
        raise IndexError(f"arm {arm} out of range for {env.n_arms} arms")
    return stream.next()


class RewardOracle:
    """The only view of the environment an algorithm gets.

    Arms are exposed under shuffled labels so that index-based tie breaking
    cannot reveal the true mean order; ``to_global`` maps labels back.
    """

    def __init__(
        self,
        env: Environment,
        streams: Sequence[ArmStream],
        labels: Sequence[int] | None = None,
        budget: int = DEFAULT_BUDGET,
    ):
        if len(streams) != env.n_arms:
            raise ValueError("one stream per arm is required")
        self.n_arms = env.n_arms
        self._labels = list(labels) if labels is not None else list(range(env.n_arms))
        self._streams = [streams[g] for g in self._labels]
        self.budget = int(budget)
        self.total_pulls = 0

    @classmethod
    def seeded(
        cls,
        env: Environment,
        seeds: SeedPolicy,
        row: int,
        replication: int,
        budget: int = DEFAULT_BUDGET,
        shuffle: bool = True,
    ) -> "RewardOracle":
        labels = seeds.permutation(env.n_arms, row, replication) if shuffle else None
        return cls(env, seeds.streams(env, row, replication), labels, budget)

    def to_global(self, label: int) -> int:
        return self._labels[label]

    def _charge(self, k: int) -> None:
        self.total_pulls += k
        if self.total_pulls > self.budget:
            raise BudgetExceeded(self.budget, self.total_pulls)

    def pull(self, arm: int) -> float:
        self._charge(1)
        return self._streams[arm].next()

    def pull_sum(self, arm: int, times: int) -> float:
        """Total reward of ``times`` consecutive pulls of ``arm``."""
        if times <= 0:
            return 0.0
        self._charge(times)
        return float(self._streams[arm].take(times).sum())
