"""Generating, splitting, and scoring relative-similarity triplets.

A triplet (i, j, k) asserts that object i is closer to j than to k. Two
generators are provided: exhaustive enumeration from class labels over a
labeled prefix (i and j share a class, k does not), and expansion of a
screen interaction where a reference object plus a marked subset S of a
shown group G yields every (ref, s in S, g in G minus S).

For a labeled prefix with class sizes c_t the number of ordered label
triplets is sum_t c_t * (c_t - 1) * (n - c_t); enumeration order is fixed
(class id, then i, then j, then k, all ascending) so capped subsamples are
reproducible from the seed alone.
"""

from __future__ import annotations

import numpy as np

from .loss import as_coords, pairwise_sq_dists
from .types import Embedding, LabelVector, TripletSet, UNREVEALED


def count_label_triplets(labels: LabelVector, n: int) -> int:
    """Closed-form size of the exhaustive set over the first n objects."""
    if not 0 <= n <= len(labels.labels):
        raise ValueError(f"prefix length {n} out of range")
    prefix = labels.labels[:n]
    if np.any(prefix == UNREVEALED):
        raise ValueError("unrevealed label inside the prefix")
    counts = np.bincount(prefix)
    counts = counts[counts > 0]
    return int(np.sum(counts * (counts - 1) * (n - counts)))


def sample_from_labels(
    labels: LabelVector, n: int, cap: int | None = None, seed: int = 0
) -> TripletSet:
    """All ordered (i, j, k) with i,j,k < n, label(i) == label(j) != label(k).

    With `cap`, a uniform subsample without replacement is drawn (seeded) and
    returned in enumeration order.
    """
    if not 0 <= n <= len(labels.labels):
        raise ValueError(f"prefix length {n} out of range")
    prefix = labels.labels[:n]
    if np.any(prefix == UNREVEALED):
        raise ValueError("unrevealed label inside the prefix")
    blocks = []
    idx = np.arange(n, dtype=np.int64)
    for cls in np.unique(prefix):
        members = idx[prefix == cls]
        others = idx[prefix != cls]
        if len(members) < 2 or len(others) == 0:
            continue
        m = len(members)
        ii = np.repeat(members, m)
        jj = np.tile(members, m)
        keep = ii != jj
        ii, jj = ii[keep], jj[keep]
        o = len(others)
        block = np.empty((len(ii) * o, 3), dtype=np.int64)
        block[:, 0] = np.repeat(ii, o)
        block[:, 1] = np.repeat(jj, o)
        block[:, 2] = np.tile(others, len(ii))
        blocks.append(block)
    if not blocks:
        return TripletSet.empty()
    full = np.concatenate(blocks)
    assert len(full) == count_label_triplets(labels, n)
    if cap is not None:
        if cap < 0:
            raise ValueError(f"cap must be non-negative, got {cap}")
        if cap < len(full):
            rng = np.random.default_rng(seed)
            pick = np.sort(rng.choice(len(full), size=cap, replace=False))
            full = full[pick]
    if len(full) == 0:
        return TripletSet.empty()
    return TripletSet(full)


def expand_selection(ref: int, selected: list[int], shown: list[int]) -> TripletSet:
    """Screen interaction to triplets: (ref, s, g) for s marked, g shown but unmarked.

    The reference must not itself be in the shown group, and every marked
    index must be shown. Yields len(selected) * (len(shown) - len(selected))
    triplets; zero when the selection is empty or covers the whole group.
    """
    shown_list = list(shown)
    shown_set = set(shown_list)
    if len(shown_set) != len(shown_list):
        raise ValueError("duplicate index in shown group")
    sel_list = list(selected)
    sel_set = set(sel_list)
    if len(sel_set) != len(sel_list):
        raise ValueError("duplicate index in selection")
    if ref in shown_set:
        raise ValueError(f"reference {ref} appears in the shown group")
    bad = sel_set - shown_set
    if bad:
        raise ValueError(f"selected index {sorted(bad)[0]} not in the shown group")
    rest = [g for g in shown_list if g not in sel_set]
    rows = [(ref, s, g) for s in sel_list for g in rest]
    if not rows:
        return TripletSet.empty()
    return TripletSet(np.array(rows, dtype=np.int64))


def split(
    t: TripletSet, test_fraction: float, seed: int = 0
) -> tuple[TripletSet, TripletSet]:
    """Seeded disjoint train/test split; test gets round(M * fraction) triplets."""
    if len(t) == 0:
        raise ValueError("cannot split an empty triplet set")
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    m = len(t)
    n_test = int(round(m * test_fraction))
    perm = np.random.default_rng(seed).permutation(m)
    test_pos = np.sort(perm[:n_test])
    train_pos = np.sort(perm[n_test:])

    def subset(pos):
        if len(pos) == 0:
            return TripletSet.empty()
        return TripletSet(t.indices[pos])

    return subset(train_pos), subset(test_pos)


def violation_fraction(y: Embedding | np.ndarray, t: TripletSet) -> float:
    """Fraction of triplets with d(i,j)^2 >= d(i,k)^2 in the embedding.

    Ties count as violations, so a fully degenerate embedding scores 1.0.
    """
    if len(t) == 0:
        raise ValueError("violation fraction of an empty triplet set")
    coords = as_coords(y)
    t.check_bounds(coords.shape[0])
    sq = pairwise_sq_dists(coords)
    idx = t.indices
    d_ij = sq[idx[:, 0], idx[:, 1]]
    d_ik = sq[idx[:, 0], idx[:, 2]]
    return float(np.mean(d_ij >= d_ik))
