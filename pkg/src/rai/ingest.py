"""MovieLens-style ratings files -> RAI instance over the most-rated items."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .environments import Environment, make_environment
from .instance import ClusterSpec, Instance, InstanceError, RequirementSpec, build_instance

HEADER = ("userId", "movieId", "rating", "timestamp")


class IngestError(ValueError):
    """Malformed ratings file or an item set that cannot form an instance."""


@dataclass(frozen=True, eq=False)
class RatingsTable:
    users: np.ndarray
    items: np.ndarray
    ratings: np.ndarray
    raw_max: float

    def __len__(self) -> int:
        return len(self.ratings)

    @property
    def n_items(self) -> int:
        return len(np.unique(self.items))


@dataclass(frozen=True, eq=False)
class ItemSummary:
    item_id: int
    count: int
    mean: float
    ratings: np.ndarray  # normalised to [0, 1]


def parse_ratings(path: str | Path, raw_max: float = 5.0) -> RatingsTable:
    if not raw_max > 0:
        raise IngestError(f"raw_max must be positive, got {raw_max}")
    path = Path(path)
    try:
        fh = path.open(newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise IngestError(f"cannot read ratings file {path}: {exc}") from exc
    users, items, ratings = [], [], []
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != HEADER:
            raise IngestError(f"{path}:1: expected header {','.join(HEADER)}, got {header}")
        for row in reader:
            line = reader.line_num
            if not row or all(not f.strip() for f in row):
                continue
            if len(row) != 4:
                raise IngestError(f"{path}:{line}: expected 4 fields, got {len(row)}")
            try:
                user, item = int(row[0]), int(row[1])
                int(row[3])  # timestamp is validated and dropped
            except ValueError:
                raise IngestError(f"{path}:{line}: non-integer id or timestamp in {row}") from None
            try:
                rating = float(row[2])
            except ValueError:
                raise IngestError(f"{path}:{line}: non-numeric rating {row[2]!r}") from None
            if not 0.0 < rating <= raw_max:
                raise IngestError(f"{path}:{line}: rating {rating} outside (0, {raw_max}]")
            users.append(user)
            items.append(item)
            ratings.append(rating)
    if not ratings:
        raise IngestError(f"{path}: no records")
    return RatingsTable(
        np.asarray(users, dtype=np.int64),
        np.asarray(items, dtype=np.int64),
        np.asarray(ratings, dtype=np.float64),
        float(raw_max),
    )


def top_items(table: RatingsTable, n: int) -> list[ItemSummary]:
    """The ``n`` most-rated items, sorted by normalised mean (descending).

    Count ties go to the smaller item id, and so do mean ties in the final sort.
    """
    ids, counts = np.unique(table.items, return_counts=True)
    if n < 1 or len(ids) < n:
        raise IngestError(f"need {n} items but the table has {len(ids)}")
    chosen = sorted(zip(ids.tolist(), counts.tolist()), key=lambda t: (-t[1], t[0]))[:n]
    out = []
    for item, count in chosen:
        scaled = table.ratings[table.items == item] / table.raw_max
        out.append(ItemSummary(item, count, float(scaled.mean()), scaled))
    out.sort(key=lambda s: (-s.mean, s.item_id))
    return out


def build_movielens_instance(
    items: Sequence[ItemSummary],
    sizes: ClusterSpec,
    required: RequirementSpec,
) -> tuple[Instance, Environment]:
    means = [s.mean for s in items]
    if any(a < b for a, b in zip(means, means[1:])):
        raise IngestError("items must be sorted by normalised mean, descending")
    if sizes.n_arms != len(items):
        raise IngestError(f"cluster sizes add up to {sizes.n_arms}, but {len(items)} items given")
    for k in sizes.offsets()[1:]:
        if means[k - 1] == means[k]:
            raise IngestError(
                f"items {items[k - 1].item_id} and {items[k].item_id} share mean "
                f"{means[k]:.6g} across a cluster boundary; try a different n"
            )
    try:
        instance = build_instance(means, sizes.sizes, required.required)
    except InstanceError as exc:
        raise IngestError(str(exc)) from exc
    env = make_environment(instance, "empirical", [s.ratings for s in items])
    return instance, env
