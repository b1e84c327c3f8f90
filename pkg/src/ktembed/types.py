"""Shared domain types.

Identifiers are strings at the file boundary and dense 0-based indices
everywhere else; all numeric code works on indices so hot loops never touch
id lookups. Every type validates on construction and is immutable afterwards
(arrays are marked read-only), so instances are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

AUTO = None  # sentinel for "pick the triplet weight automatically"


class ParseError(ValueError):
    """A file failed to parse or validate; message names the file and line."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def check_ids(ids: Sequence[str]) -> list[str]:
    ids = [str(s) for s in ids]
    if len(ids) == 0:
        raise ValueError("id list is empty")
    seen: set[str] = set()
    for s in ids:
        if not s:
            raise ValueError("empty id")
        if s in seen:
            raise ValueError(f"duplicate id {s!r}")
        seen.add(s)
    return ids


def index_of(ids: Sequence[str]) -> dict[str, int]:
    """Bijective id -> dense index map (inverse of plain list indexing)."""
    return {s: i for i, s in enumerate(ids)}


@dataclass(frozen=True)
class FeatureMatrix:
    """N objects with D-dimensional machine feature vectors."""

    ids: list[str]
    values: np.ndarray

    def __post_init__(self):
        ids = check_ids(self.ids)
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"feature matrix must be 2-D, got shape {values.shape}")
        n, d = values.shape
        if n != len(ids):
            raise ValueError(f"{len(ids)} ids but {n} feature rows")
        if d < 1:
            raise ValueError("feature matrix needs at least one column")
        if not np.all(np.isfinite(values)):
            bad = int(np.argwhere(~np.isfinite(values).all(axis=1))[0, 0])
            raise ValueError(f"non-finite feature value in row for id {ids[bad]!r}")
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "values", _readonly(values))

    @property
    def n(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class DistanceKernel:
    """Symmetric N x N distance matrix over the same objects.

    Construction rejects asymmetry beyond 1e-9, nonzero diagonals beyond the
    same tolerance, negative or non-finite entries; small print round-off is
    repaired by averaging with the transpose and zeroing the diagonal.
    """

    ids: list[str]
    dist: np.ndarray

    def __post_init__(self):
        ids = check_ids(self.ids)
        dist = np.asarray(self.dist, dtype=float)
        n = len(ids)
        if dist.shape != (n, n):
            raise ValueError(f"kernel shape {dist.shape} does not match {n} ids")
        if not np.all(np.isfinite(dist)):
            raise ValueError("kernel contains non-finite entries")
        asym = np.abs(dist - dist.T).max(initial=0.0)
        if asym > 1e-9:
            raise ValueError(f"kernel is asymmetric (max |K - K^T| = {asym:g})")
        diag = np.abs(np.diagonal(dist)).max(initial=0.0)
        if diag > 1e-9:
            raise ValueError(f"kernel diagonal is not zero (max |K_ii| = {diag:g})")
        if dist.min(initial=0.0) < 0:
            raise ValueError(f"kernel has negative entry {dist.min():g}")
        dist = (dist + dist.T) / 2.0
        np.fill_diagonal(dist, 0.0)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "dist", _readonly(dist))

    @property
    def n(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class Triplet:
    """Constraint: object i is closer to j than to k."""

    i: int
    j: int
    k: int

    def __post_init__(self):
        if len({self.i, self.j, self.k}) != 3:
            raise ValueError(f"degenerate triplet ({self.i}, {self.j}, {self.k})")


@dataclass(frozen=True)
class TripletSet:
    """Ordered collection of triplet constraints, stored as an (M, 3) array.

    Duplicates are permitted; crowd data repeats. Index bounds are checked
    against N wherever a concrete dataset is in play (see `check_bounds`).
    """

    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.size == 0:
            idx = idx.reshape(0, 3)
        if idx.ndim != 2 or idx.shape[1] != 3:
            raise ValueError(f"triplet array must have shape (M, 3), got {idx.shape}")
        if idx.size and idx.min() < 0:
            raise ValueError("negative triplet index")
        i, j, k = idx.T
        degen = (i == j) | (i == k) | (j == k)
        if degen.any():
            row = int(np.argmax(degen))
            raise ValueError(f"degenerate triplet {tuple(idx[row])} at position {row}")
        object.__setattr__(self, "indices", _readonly(idx))

    @classmethod
    def from_triplets(cls, triplets: Sequence[Triplet | tuple[int, int, int]]) -> "TripletSet":
        arr = np.array([(t[0], t[1], t[2]) if isinstance(t, tuple) else (t.i, t.j, t.k)
                        for t in triplets], dtype=np.int64).reshape(-1, 3)
        return cls(arr)

    @classmethod
    def empty(cls) -> "TripletSet":
        return cls(np.empty((0, 3), dtype=np.int64))

    def check_bounds(self, n: int) -> None:
        if len(self) and self.indices.max() >= n:
            raise ValueError(f"triplet index {self.indices.max()} out of range for N={n}")

    def __len__(self) -> int:
        return self.indices.shape[0]

    def __iter__(self) -> Iterator[Triplet]:
        for i, j, k in self.indices:
            yield Triplet(int(i), int(j), int(k))


@dataclass(frozen=True)
class Embedding:
    """N low-dimensional coordinate rows, one per object id."""

    ids: list[str]
    coords: np.ndarray

    def __post_init__(self):
        ids = check_ids(self.ids)
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim != 2 or coords.shape[0] != len(ids) or coords.shape[1] < 1:
            raise ValueError(f"coordinate shape {coords.shape} does not match {len(ids)} ids")
        if not np.all(np.isfinite(coords)):
            raise ValueError("non-finite coordinate")
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "coords", _readonly(coords))

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def d(self) -> int:
        return self.coords.shape[1]


UNREVEALED = -1


@dataclass(frozen=True)
class LabelVector:
    """Integer class id per object; -1 marks an unrevealed label."""

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1:
            raise ValueError("labels must be a 1-D integer array")
        if labels.size and labels.min() < UNREVEALED:
            raise ValueError(f"label ids must be >= -1, got {labels.min()}")
        object.__setattr__(self, "labels", _readonly(labels))

    def __len__(self) -> int:
        return self.labels.shape[0]

    def revealed(self) -> np.ndarray:
        return self.labels >= 0


@dataclass(frozen=True)
class EmbedConfig:
    """Hyperparameters for one embedding run.

    `triplet_weight` mixes the triplet loss against the neighbor loss
    (0 = kernel only, 1 = triplets only); leave it as AUTO/None to balance
    the two gradient norms at initialization. The early phase multiplies the
    affinity matrix by `exaggeration_factor` and uses `momentum_early`; both
    switch off together at `exaggeration_iters`.
    """

    triplet_weight: float | None = AUTO
    alpha: float = 1.0
    perplexity: float = 30.0
    d: int = 2
    total_iters: int = 300
    exaggeration_iters: int = 100
    exaggeration_factor: float = 4.0
    learning_rate: float = 200.0
    momentum_early: float = 0.5
    momentum_late: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if self.triplet_weight is not None and not 0.0 <= self.triplet_weight <= 1.0:
            raise ValueError(f"triplet_weight must be in [0, 1], got {self.triplet_weight}")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.perplexity <= 1:
            raise ValueError("perplexity must exceed 1")
        if self.d < 1:
            raise ValueError("output dimension must be >= 1")
        if self.total_iters < 0 or self.exaggeration_iters < 0:
            raise ValueError("iteration counts must be non-negative")
        if self.exaggeration_iters > self.total_iters:
            raise ValueError("exaggeration_iters cannot exceed total_iters")
        if self.exaggeration_factor <= 0:
            raise ValueError("exaggeration_factor must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        for name in ("momentum_early", "momentum_late"):
            m = getattr(self, name)
            if not 0.0 <= m < 1.0:
                raise ValueError(f"{name} must be in [0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
