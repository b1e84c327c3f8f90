"""CSV readers and writers for the on-disk contracts.

Formats (all comma-separated, one header line, UTF-8):

  features.csv   id,f0,...,f{D-1}
  triplets.csv   i,j,k            (cells are object ids)
  kernel.csv     header row of ids, then N rows of N distances
  embedding.csv  id,x0,...,x{d-1}
  labels.csv     id,label         (ids absent from the file stay unrevealed)

Numbers are written with 17 significant digits so a save/load round trip
reproduces every double exactly. Lines starting with '#' are treated as
comments and skipped (the assignment kernel records its shift constant that
way). Loaders raise ParseError naming the offending file and line.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import numpy as np

from .types import (
    UNREVEALED,
    DistanceKernel,
    Embedding,
    FeatureMatrix,
    LabelVector,
    ParseError,
    TripletSet,
    check_ids,
    index_of,
)

_FMT = "%.17g"


def fmt(x: float) -> str:
    return _FMT % x


def _rows(path: str | Path) -> list[tuple[int, list[str]]]:
    """Non-comment CSV rows of `path` paired with 1-based line numbers."""
    p = Path(path)
    if not p.exists():
        raise ParseError(f"{p}: file not found")
    out = []
    with open(p, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (row[0].startswith("#") and len(row) == 1):
                continue
            if row[0].lstrip().startswith("#"):
                continue
            out.append((lineno, [cell.strip() for cell in row]))
    return out


def _parse_float(cell: str, path: Path, lineno: int) -> float:
    try:
        v = float(cell)
    except ValueError:
        raise ParseError(f"{path}:{lineno}: not a number: {cell!r}") from None
    if not np.isfinite(v):
        raise ParseError(f"{path}:{lineno}: non-finite value {cell!r}")
    return v


def load_features(path: str | Path) -> FeatureMatrix:
    path = Path(path)
    rows = _rows(path)
    if not rows:
        raise ParseError(f"{path}: no rows")
    header_line, header = rows[0]
    if len(header) < 2 or header[0] != "id":
        raise ParseError(f"{path}:{header_line}: expected header 'id,f0,...'")
    width = len(header)
    if not rows[1:]:
        raise ParseError(f"{path}: no rows")
    ids, values = [], []
    for lineno, row in rows[1:]:
        if len(row) != width:
            raise ParseError(f"{path}:{lineno}: expected {width} cells, got {len(row)}")
        ids.append(row[0])
        values.append([_parse_float(c, path, lineno) for c in row[1:]])
    try:
        return FeatureMatrix(ids, np.array(values))
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None


def save_features(f: FeatureMatrix, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id"] + [f"f{i}" for i in range(f.values.shape[1])])
        for oid, row in zip(f.ids, f.values):
            w.writerow([oid] + [fmt(v) for v in row])


def load_triplets(path: str | Path, ids: Sequence[str]) -> TripletSet:
    path = Path(path)
    rows = _rows(path)
    if not rows:
        raise ParseError(f"{path}: no rows")
    index = index_of(ids)
    header_line, header = rows[0]
    if [c.lower() for c in header] != ["i", "j", "k"]:
        raise ParseError(f"{path}:{header_line}: expected header 'i,j,k'")
    out = np.empty((len(rows) - 1, 3), dtype=np.int64)
    for pos, (lineno, row) in enumerate(rows[1:]):
        if len(row) != 3:
            raise ParseError(f"{path}:{lineno}: expected 3 cells, got {len(row)}")
        try:
            trip = tuple(index[c] for c in row)
        except KeyError as e:
            raise ParseError(f"{path}:{lineno}: unknown id {e.args[0]!r}") from None
        if len(set(trip)) != 3:
            raise ParseError(f"{path}:{lineno}: degenerate triplet {tuple(row)}")
        out[pos] = trip
    return TripletSet(out)


def save_triplets(t: TripletSet, ids: Sequence[str], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "k"])
        for i, j, k in t.indices:
            w.writerow([ids[i], ids[j], ids[k]])


def load_kernel(path: str | Path) -> DistanceKernel:
    path = Path(path)
    rows = _rows(path)
    if not rows:
        raise ParseError(f"{path}: no rows")
    header_line, ids = rows[0]
    n = len(ids)
    body = rows[1:]
    if len(body) != n:
        raise ParseError(f"{path}: header names {n} ids but found {len(body)} rows")
    dist = np.empty((n, n))
    for r, (lineno, row) in enumerate(body):
        if len(row) != n:
            raise ParseError(f"{path}:{lineno}: expected {n} cells, got {len(row)}")
        dist[r] = [_parse_float(c, path, lineno) for c in row]
    try:
        return DistanceKernel(ids, dist)
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None


def save_kernel(k: DistanceKernel, path: str | Path, comment: str | None = None) -> None:
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        w = csv.writer(fh)
        w.writerow(k.ids)
        for row in k.dist:
            w.writerow([fmt(v) for v in row])


def load_embedding(path: str | Path) -> Embedding:
    path = Path(path)
    rows = _rows(path)
    if not rows:
        raise ParseError(f"{path}: no rows")
    header_line, header = rows[0]
    if len(header) < 2 or header[0] != "id":
        raise ParseError(f"{path}:{header_line}: expected header 'id,x0,...'")
    width = len(header)
    ids, coords = [], []
    for lineno, row in rows[1:]:
        if len(row) != width:
            raise ParseError(f"{path}:{lineno}: expected {width} cells, got {len(row)}")
        ids.append(row[0])
        coords.append([_parse_float(c, path, lineno) for c in row[1:]])
    if not ids:
        raise ParseError(f"{path}: no rows")
    try:
        return Embedding(ids, np.array(coords))
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None


def save_embedding(y: Embedding, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id"] + [f"x{i}" for i in range(y.d)])
        for oid, row in zip(y.ids, y.coords):
            w.writerow([oid] + [fmt(v) for v in row])


def embedding_csv(y: Embedding) -> str:
    """embedding.csv contents as a string (the service export uses this)."""
    lines = [",".join(["id"] + [f"x{i}" for i in range(y.d)])]
    for oid, row in zip(y.ids, y.coords):
        lines.append(",".join([oid] + [fmt(v) for v in row]))
    return "\n".join(lines) + "\n"


def triplets_csv(t: TripletSet, ids: Sequence[str]) -> str:
    lines = ["i,j,k"]
    for i, j, k in t.indices:
        lines.append(f"{ids[i]},{ids[j]},{ids[k]}")
    return "\n".join(lines) + "\n"


def load_labels(path: str | Path, ids: Sequence[str]) -> LabelVector:
    """Labels aligned to `ids`; ids missing from the file stay unrevealed.

    Label cells are arbitrary strings and are densified to integer class ids
    in order of first appearance in the file.
    """
    path = Path(path)
    rows = _rows(path)
    if not rows:
        raise ParseError(f"{path}: no rows")
    header_line, header = rows[0]
    if [c.lower() for c in header] != ["id", "label"]:
        raise ParseError(f"{path}:{header_line}: expected header 'id,label'")
    index = index_of(ids)
    labels = np.full(len(ids), UNREVEALED, dtype=np.int64)
    classes: dict[str, int] = {}
    for lineno, row in rows[1:]:
        if len(row) != 2:
            raise ParseError(f"{path}:{lineno}: expected 2 cells, got {len(row)}")
        oid, cls = row
        if oid not in index:
            raise ParseError(f"{path}:{lineno}: unknown id {oid!r}")
        if cls not in classes:
            classes[cls] = len(classes)
        labels[index[oid]] = classes[cls]
    return LabelVector(labels)


def load_labeled_ids(path: str | Path) -> tuple[list[str], LabelVector]:
    """Same format as load_labels, but the file itself defines the id universe.

    Every row must then carry a label, so the result has no unrevealed
    entries; ids keep file order.
    """
    path = Path(path)
    rows = _rows(path)
    if not rows:
        raise ParseError(f"{path}: no rows")
    header_line, header = rows[0]
    if [c.lower() for c in header] != ["id", "label"]:
        raise ParseError(f"{path}:{header_line}: expected header 'id,label'")
    ids: list[str] = []
    dense: list[int] = []
    classes: dict[str, int] = {}
    for lineno, row in rows[1:]:
        if len(row) != 2:
            raise ParseError(f"{path}:{lineno}: expected 2 cells, got {len(row)}")
        oid, cls = row
        if cls not in classes:
            classes[cls] = len(classes)
        ids.append(oid)
        dense.append(classes[cls])
    if not ids:
        raise ParseError(f"{path}: no rows")
    try:
        check_ids(ids)
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None
    return ids, LabelVector(np.array(dense, dtype=np.int64))
