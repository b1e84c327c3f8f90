"""Distance kernels computed from machine data.

Two builders: plain Euclidean distances between feature rows, and a
token-list kernel where the similarity of two objects is the total weight of
the maximum one-to-one matching between their token embedding vectors
(dot-product costs, unit-normalized vectors). The matching covers all of the
shorter list, which is the well-posed reading for unequal lengths and
reduces to a full assignment when the lists match in size.

Matching similarities are negated into raw "distances", which can be
negative; the whole off-diagonal block is shifted by its minimum so the
result satisfies the DistanceKernel contract (non-negative, zero diagonal).
The shift constant is returned alongside the kernel and recorded as a header
comment when written to disk, since downstream bandwidth calibration absorbs
it only approximately.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from .types import DistanceKernel, FeatureMatrix, ParseError, _readonly, check_ids


def euclidean_kernel(f: FeatureMatrix) -> DistanceKernel:
    """Pairwise Euclidean distances between feature rows."""
    return DistanceKernel(f.ids, cdist(f.values, f.values, "euclidean"))


def normalize_token(token: str) -> str:
    return token.strip().casefold()


@dataclass(frozen=True)
class TokenEmbeddingTable:
    """Unit-norm embedding vector per token; lookup is case-folded and trimmed."""

    vectors: dict[str, np.ndarray]

    def __post_init__(self):
        if not self.vectors:
            raise ValueError("empty token table")
        dims = set()
        clean: dict[str, np.ndarray] = {}
        for token, vec in self.vectors.items():
            v = np.asarray(vec, dtype=float)
            if v.ndim != 1 or not np.all(np.isfinite(v)):
                raise ValueError(f"bad vector for token {token!r}")
            norm = float(np.linalg.norm(v))
            if abs(norm - 1.0) > 1e-6:
                raise ValueError(f"vector for token {token!r} has norm {norm:g}, expected 1")
            dims.add(v.shape[0])
            clean[normalize_token(token)] = _readonly(v)
        if len(dims) != 1:
            raise ValueError(f"mixed vector dimensions {sorted(dims)}")
        object.__setattr__(self, "vectors", clean)

    def lookup(self, token: str) -> np.ndarray:
        key = normalize_token(token)
        if key not in self.vectors:
            raise KeyError(f"unresolvable token {token!r}")
        return self.vectors[key]

    def resolve(self, tokens: list[str]) -> np.ndarray:
        return np.array([self.lookup(t) for t in tokens])


@dataclass(frozen=True)
class TokenListCollection:
    """One non-empty token list per object id."""

    ids: list[str]
    lists: list[list[str]]

    def __post_init__(self):
        ids = check_ids(self.ids)
        if len(self.lists) != len(ids):
            raise ValueError(f"{len(ids)} ids but {len(self.lists)} token lists")
        lists = []
        for oid, tokens in zip(ids, self.lists):
            tokens = [normalize_token(t) for t in tokens]
            if not tokens or any(not t for t in tokens):
                raise ValueError(f"empty token (or token list) for id {oid!r}")
            lists.append(tokens)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "lists", lists)

    @property
    def n(self) -> int:
        return len(self.ids)


def load_token_vectors(path: str | Path) -> TokenEmbeddingTable:
    """Parse `token v1 v2 ... vE` lines; vectors are re-normalized on load."""
    path = Path(path)
    if not path.exists():
        raise ParseError(f"{path}: file not found")
    vectors: dict[str, np.ndarray] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if len(parts) < 2:
                raise ParseError(f"{path}:{lineno}: expected 'token v1 ... vE'")
            token = normalize_token(parts[0])
            if token in vectors:
                raise ParseError(f"{path}:{lineno}: duplicate token {parts[0]!r}")
            try:
                v = np.array([float(c) for c in parts[1:]])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: not a number in vector") from None
            if not np.all(np.isfinite(v)):
                raise ParseError(f"{path}:{lineno}: non-finite vector component")
            norm = float(np.linalg.norm(v))
            if norm == 0.0:
                raise ParseError(f"{path}:{lineno}: zero vector cannot be normalized")
            vectors[token] = v / norm
    if not vectors:
        raise ParseError(f"{path}: no rows")
    return TokenEmbeddingTable(vectors)


def load_token_lists(path: str | Path) -> TokenListCollection:
    """tokens.csv: header `id,tokens`, lists semicolon-delimited."""
    from .io import _rows  # shared CSV walking

    path = Path(path)
    rows = _rows(path)
    if not rows:
        raise ParseError(f"{path}: no rows")
    header_line, header = rows[0]
    if [c.lower() for c in header] != ["id", "tokens"]:
        raise ParseError(f"{path}:{header_line}: expected header 'id,tokens'")
    ids, lists = [], []
    for lineno, row in rows[1:]:
        if len(row) != 2:
            raise ParseError(f"{path}:{lineno}: expected 2 cells, got {len(row)}")
        tokens = [t for t in (s.strip() for s in row[1].split(";")) if t]
        if not tokens:
            raise ParseError(f"{path}:{lineno}: empty token list for id {row[0]!r}")
        ids.append(row[0])
        lists.append(tokens)
    if not ids:
        raise ParseError(f"{path}: no rows")
    try:
        return TokenListCollection(ids, lists)
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None


def assignment_similarity(a: list[str], b: list[str], table: TokenEmbeddingTable) -> float:
    """Maximum total dot-product weight of a one-to-one matching of the shorter list.

    Solved exactly via the rectangular assignment solver; symmetric in its
    two list arguments.
    """
    if not a or not b:
        raise ValueError("token lists must be non-empty")
    cost = table.resolve(a) @ table.resolve(b).T
    rows, cols = linear_sum_assignment(cost, maximize=True)
    return float(cost[rows, cols].sum())


def assignment_kernel(
    lists: TokenListCollection, table: TokenEmbeddingTable
) -> tuple[DistanceKernel, float]:
    """Matching-similarity kernel over all pairs, shifted to valid distances.

    Returns the kernel and the shift constant (the minimum raw off-diagonal
    value that was subtracted). A single-object collection gives the 1x1 zero
    kernel with zero shift.
    """
    n = lists.n
    raw = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            raw[i, j] = raw[j, i] = -assignment_similarity(lists.lists[i], lists.lists[j], table)
    if n < 2:
        return DistanceKernel(lists.ids, raw), 0.0
    off = ~np.eye(n, dtype=bool)
    shift = float(raw[off].min())
    dist = raw - shift
    np.fill_diagonal(dist, 0.0)
    return DistanceKernel(lists.ids, dist), shift
