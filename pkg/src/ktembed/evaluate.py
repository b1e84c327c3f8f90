"""Clustering-based evaluation of embeddings against withheld class labels.

KMeans is implemented here directly (D-squared seeding plus Lloyd updates)
rather than pulled from a fitted library, because the determinism contract
is strict: one seed must give one clustering, restart r of a run must not
depend on how many restarts follow it, and ties must break to the lowest
index. Seeding draws exactly k random values per restart regardless of the
data, which is what makes restart prefixes stable.

Accuracy scores a clustering by giving every cluster its modal true label
(ties to the smallest label id) and counting the objects that match. The
labeling curve repeats the embed-then-cluster pipeline as the labeled
prefix grows, reporting mean and standard error over replicate seeds; at
n = 0 there are no triplets, so the triplet weight is forced to zero and
the curve's first point is the pure distance-kernel baseline.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist

from .affinity import affinity_matrix
from .io import _FMT
from .loss import as_coords
from .optimize import embed
from .triplets import sample_from_labels
from .types import (
    DistanceKernel,
    Embedding,
    EmbedConfig,
    LabelVector,
    TripletSet,
    UNREVEALED,
    _readonly,
)

LLOYD_MAX_ITERS = 300
DEFAULT_RESTARTS = 10


@dataclass(frozen=True)
class ClusterAssignment:
    """Cluster label per object plus the centroids and total inertia."""

    labels: np.ndarray
    centroids: np.ndarray
    inertia: float

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        centroids = np.asarray(self.centroids, dtype=float)
        if labels.ndim != 1 or centroids.ndim != 2:
            raise ValueError("labels must be 1-D and centroids 2-D")
        k = centroids.shape[0]
        if labels.size and (labels.min() < 0 or labels.max() >= k):
            raise ValueError("cluster label out of range")
        object.__setattr__(self, "labels", _readonly(labels))
        object.__setattr__(self, "centroids", _readonly(centroids))

    @property
    def k(self) -> int:
        return self.centroids.shape[0]


def _seed_centroids(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """D-squared seeding with a fixed budget of k draws.

    The first draw picks uniformly; each later draw consumes one uniform
    and inverts the cumulative distance-squared distribution. Degenerate
    data (all remaining mass zero) falls back to a uniform pick from the
    same draw, so the rng stream position never depends on the data.
    """
    n = x.shape[0]
    centroids = np.empty((k, x.shape[1]))
    first = int(rng.integers(n))
    centroids[0] = x[first]
    if k == 1:
        return centroids
    best_sq = cdist(x, centroids[:1], "sqeuclidean")[:, 0]
    for c in range(1, k):
        u = float(rng.random())
        total = best_sq.sum()
        if total > 0.0:
            pick = int(np.searchsorted(np.cumsum(best_sq) / total, u, side="right"))
            pick = min(pick, n - 1)
        else:
            pick = min(int(u * n), n - 1)
        centroids[c] = x[pick]
        best_sq = np.minimum(best_sq, cdist(x, centroids[c : c + 1], "sqeuclidean")[:, 0])
    return centroids


def _lloyd(x: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Alternate assignment and mean updates until assignments stop changing.

    Empty clusters are reseeded at the point currently farthest from its own
    centroid (largest index on ties is avoided by argmax picking the first).
    The within-cluster sum of squares after each update step never increases;
    that is asserted, not hoped for.
    """
    k = centroids.shape[0]
    centroids = centroids.copy()
    prev_labels = None
    prev_inertia = np.inf
    for _ in range(LLOYD_MAX_ITERS):
        sq = cdist(x, centroids, "sqeuclidean")
        labels = np.argmin(sq, axis=1)
        point_sq = sq[np.arange(x.shape[0]), labels]
        for c in range(k):
            if not np.any(labels == c):
                far = int(np.argmax(point_sq))
                labels[far] = c
                point_sq[far] = 0.0
        for c in range(k):
            members = labels == c
            if np.any(members):
                centroids[c] = x[members].mean(axis=0)
        inertia = float(
            ((x - centroids[labels]) ** 2).sum()
        )
        assert inertia <= prev_inertia + 1e-9, "Lloyd step increased inertia"
        prev_inertia = inertia
        if prev_labels is not None and np.array_equal(labels, prev_labels):
            break
        prev_labels = labels
    return labels, centroids, prev_inertia


def kmeans(
    y: Embedding | np.ndarray, k: int, seed: int = 0, restarts: int = DEFAULT_RESTARTS
) -> ClusterAssignment:
    """Best of `restarts` seeded KMeans runs, judged by inertia (first wins ties)."""
    x = as_coords(y)
    n = x.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if restarts < 1:
        raise ValueError(f"restarts must be positive, got {restarts}")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        start = _seed_centroids(x, k, rng)
        labels, centroids, inertia = _lloyd(x, start)
        if best is None or inertia < best[2]:
            best = (labels, centroids, inertia)
    return ClusterAssignment(best[0], best[1], best[2])


def majority_label_accuracy(assignment: ClusterAssignment, labels: LabelVector) -> float:
    """Fraction of objects matching their cluster's modal true label.

    Modal ties resolve to the smallest label id. Requires every object to
    carry a revealed label.
    """
    truth = labels.labels
    if truth.shape[0] != assignment.labels.shape[0]:
        raise ValueError(
            f"{assignment.labels.shape[0]} clustered objects but {truth.shape[0]} labels"
        )
    if np.any(truth == UNREVEALED):
        raise ValueError("accuracy needs every label revealed")
    n_classes = int(truth.max()) + 1
    correct = 0
    for c in range(assignment.k):
        members = truth[assignment.labels == c]
        if members.size == 0:
            continue
        counts = np.bincount(members, minlength=n_classes)
        correct += int(counts.max())
    return correct / truth.shape[0]


@dataclass(frozen=True)
class CurvePoint:
    """One labeling-curve entry: labeled-prefix size and accuracy statistics."""

    n: int
    mean_accuracy: float
    sem: float
    seeds: int


def labeling_curve(
    kernel: DistanceKernel,
    labels: LabelVector,
    n_values: list[int],
    cfg: EmbedConfig,
    seed: int = 0,
    n_seeds: int = 5,
    cap: int | None = None,
) -> list[CurvePoint]:
    """Accuracy of embed-then-cluster as the labeled prefix grows.

    Every (prefix size, replicate) cell gets its own derived seed for
    triplet subsampling, embedding init, and clustering. Clusters are cut
    at k = number of distinct true classes. `cap` bounds the triplet count
    per cell, since exhaustive enumeration grows cubically.
    """
    truth = labels.labels
    if truth.shape[0] != kernel.n:
        raise ValueError(f"kernel has {kernel.n} objects but {truth.shape[0]} labels")
    if np.any(truth == UNREVEALED):
        raise ValueError("labeling curve needs every label revealed")
    if n_seeds < 1:
        raise ValueError(f"n_seeds must be positive, got {n_seeds}")
    k = int(truth.max()) + 1
    p = affinity_matrix(kernel, cfg.perplexity)
    children = np.random.SeedSequence(seed).spawn(len(n_values) * n_seeds)
    points = []
    for ni, n in enumerate(n_values):
        accs = np.empty(n_seeds)
        for r in range(n_seeds):
            sub = children[ni * n_seeds + r].generate_state(3)
            t = sample_from_labels(labels, n, cap=cap, seed=int(sub[0]))
            weight = cfg.triplet_weight if len(t) else 0.0
            run_cfg = replace(cfg, triplet_weight=weight, seed=int(sub[1]))
            y, _ = embed(kernel, t, run_cfg, p=p)
            assignment = kmeans(y, k, seed=int(sub[2]))
            accs[r] = majority_label_accuracy(assignment, labels)
        sem = float(accs.std(ddof=1) / np.sqrt(n_seeds)) if n_seeds > 1 else 0.0
        points.append(CurvePoint(int(n), float(accs.mean()), sem, n_seeds))
    return points


def save_curve(points: list[CurvePoint], path: str | Path) -> None:
    with open(path, "w") as fh:
        fh.write("n,mean_accuracy,sem,seeds\n")
        for pt in points:
            fh.write(f"{pt.n},{_FMT % pt.mean_accuracy},{_FMT % pt.sem},{pt.seeds}\n")
