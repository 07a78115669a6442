"""Session data model: data matrix, 2-D embedding, cluster labels, and
optional per-row metadata, ingested from headered CSV files."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np


class IngestionError(ValueError):
    """A session file failed to parse or the loaded objects are inconsistent."""


@dataclass(frozen=True)
class Dataset:
    """n x p matrix of points with unique row identifiers and named features."""

    row_ids: tuple[str, ...]
    feature_names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2:
            raise IngestionError("data matrix must be two-dimensional")
        n, p = values.shape
        if n < 2:
            raise IngestionError(f"need at least 2 data rows, got {n}")
        if p < 1:
            raise IngestionError("need at least 1 feature column")
        if len(self.row_ids) != n:
            raise IngestionError(f"{len(self.row_ids)} row ids for {n} rows")
        if len(self.feature_names) != p:
            raise IngestionError(f"{len(self.feature_names)} feature names for {p} columns")
        if len(set(self.row_ids)) != n:
            raise IngestionError("row identifiers are not unique")
        if not np.all(np.isfinite(values)):
            raise IngestionError("data matrix contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "row_ids", tuple(self.row_ids))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    @cached_property
    def _id_index(self) -> dict[str, int]:
        return {rid: i for i, rid in enumerate(self.row_ids)}

    def index_of(self, row_id: str) -> int:
        try:
            return self._id_index[row_id]
        except KeyError:
            raise KeyError(f"unknown row id {row_id!r}") from None


@dataclass(frozen=True)
class Embedding:
    """2-D coordinates aligned row-for-row with a Dataset."""

    coords: np.ndarray

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.ndim != 2 or coords.shape[1] != 2:
            raise IngestionError("embedding must have exactly two coordinate columns")
        if not np.all(np.isfinite(coords)):
            raise IngestionError("embedding contains non-finite values")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True)
class Clustering:
    """Row-aligned cluster labels over at least two classes."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(v) for v in self.labels)
        if len(set(labels)) < 2:
            raise IngestionError("clustering must contain at least 2 classes")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def k(self) -> int:
        return len(self.classes)

    @cached_property
    def classes(self) -> dict[str, np.ndarray]:
        """Label -> sorted member row indices."""
        out: dict[str, list[int]] = {}
        for i, lab in enumerate(self.labels):
            out.setdefault(lab, []).append(i)
        return {lab: np.array(idx, dtype=int) for lab, idx in sorted(out.items())}

    def label_of(self, index: int) -> str:
        return self.labels[index]


@dataclass(frozen=True)
class MetaTable:
    """Per-row metadata columns, each categorical (strings) or numeric."""

    n: int
    column_order: tuple[str, ...]
    categorical: dict[str, tuple[str, ...]]
    numeric: dict[str, np.ndarray]

    def __post_init__(self):
        for name in self.column_order:
            if (name in self.categorical) == (name in self.numeric):
                raise IngestionError(f"metadata column {name!r} must be categorical xor numeric")
        for name, col in self.categorical.items():
            if len(col) != self.n:
                raise IngestionError(f"metadata column {name!r} has {len(col)} rows, expected {self.n}")
        for name, col in self.numeric.items():
            if len(col) != self.n:
                raise IngestionError(f"metadata column {name!r} has {len(col)} rows, expected {self.n}")


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestionError(f"{path}: file is empty") from None
        rows = [row for row in reader if row]
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise IngestionError(f"{path}: row {i + 1} has {len(row)} cells, header has {len(header)}")
    return header, rows


def _parse_cell(text: str, path: Path, row: int, column: str) -> float:
    if text.strip() == "":
        raise IngestionError(f"{path}: missing value at row {row}, column {column!r}")
    try:
        return float(text)
    except ValueError:
        raise IngestionError(
            f"{path}: cannot parse {text!r} at row {row}, column {column!r}"
        ) from None


def _split_id_column(header: list[str], rows: list[list[str]]):
    """Peel off an optional leading 'id' column; returns (ids or None, header, rows)."""
    if header and header[0] == "id":
        ids = [row[0] for row in rows]
        return ids, header[1:], [row[1:] for row in rows]
    return None, header, rows


def read_data_csv(path: str | Path) -> Dataset:
    path = Path(path)
    header, rows = _read_rows(path)
    ids, feats, cells = _split_id_column(header, rows)
    if not feats:
        raise IngestionError(f"{path}: no feature columns")
    values = np.empty((len(cells), len(feats)))
    for i, row in enumerate(cells):
        for j, text in enumerate(row):
            values[i, j] = _parse_cell(text, path, i + 1, feats[j])
    if ids is None:
        ids = [str(i) for i in range(len(cells))]
    return Dataset(tuple(ids), tuple(feats), values)


def read_embedding_csv(path: str | Path) -> tuple[list[str] | None, Embedding]:
    path = Path(path)
    header, rows = _read_rows(path)
    ids, cols, cells = _split_id_column(header, rows)
    if len(cols) != 2:
        raise IngestionError(f"{path}: embedding needs exactly 2 coordinate columns, got {len(cols)}")
    coords = np.empty((len(cells), 2))
    for i, row in enumerate(cells):
        for j, text in enumerate(row):
            coords[i, j] = _parse_cell(text, path, i + 1, cols[j])
    return ids, Embedding(coords)


def read_labels_csv(path: str | Path) -> tuple[list[str] | None, Clustering]:
    path = Path(path)
    header, rows = _read_rows(path)
    ids, cols, cells = _split_id_column(header, rows)
    if len(cols) != 1:
        raise IngestionError(f"{path}: labels file needs exactly 1 label column, got {len(cols)}")
    labels = []
    for i, row in enumerate(cells):
        if row[0].strip() == "":
            raise IngestionError(f"{path}: missing label at row {i + 1}")
        labels.append(row[0])
    return ids, Clustering(tuple(labels))


def read_meta_csv(path: str | Path) -> tuple[list[str] | None, MetaTable]:
    path = Path(path)
    header, rows = _read_rows(path)
    ids, cols, cells = _split_id_column(header, rows)
    if not cols:
        raise IngestionError(f"{path}: metadata file has no columns")
    categorical: dict[str, tuple[str, ...]] = {}
    numeric: dict[str, np.ndarray] = {}
    for j, name in enumerate(cols):
        raw = [row[j] for row in cells]
        for i, text in enumerate(raw):
            if text.strip() == "":
                raise IngestionError(f"{path}: missing value at row {i + 1}, column {name!r}")
        try:
            numeric[name] = np.array([float(v) for v in raw])
        except ValueError:
            categorical[name] = tuple(raw)
    return ids, MetaTable(len(cells), tuple(cols), categorical, numeric)


def load_session(
    data_path: str | Path,
    embedding_path: str | Path,
    labels_path: str | Path,
    meta_path: str | Path | None = None,
) -> tuple[Dataset, Embedding, Clustering, MetaTable | None]:
    """Load and cross-validate the session files.

    Row alignment is checked by count and, where files carry an `id`
    column, by identity of the id sequences.
    """
    dataset = read_data_csv(data_path)
    parts: list[tuple[str, list[str] | None, int]] = [("data", list(dataset.row_ids), dataset.n)]

    emb_ids, embedding = read_embedding_csv(embedding_path)
    parts.append(("embedding", emb_ids, embedding.n))
    lab_ids, clustering = read_labels_csv(labels_path)
    parts.append(("labels", lab_ids, clustering.n))
    meta = None
    if meta_path is not None:
        meta_ids, meta = read_meta_csv(meta_path)
        parts.append(("metadata", meta_ids, meta.n))

    for name, _, count in parts[1:]:
        if count != dataset.n:
            raise IngestionError(f"{name} file has {count} rows, data has {dataset.n}")
    with_ids = [(name, ids) for name, ids, _ in parts if ids is not None]
    for (name_a, ids_a), (name_b, ids_b) in zip(with_ids, with_ids[1:]):
        if ids_a != ids_b:
            raise IngestionError(f"id columns of {name_a} and {name_b} files do not match")
    return dataset, embedding, clustering, meta


def _format(x: float) -> str:
    return repr(float(x))


def write_data_csv(dataset: Dataset, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", *dataset.feature_names])
        for rid, row in zip(dataset.row_ids, dataset.values):
            writer.writerow([rid, *(_format(v) for v in row)])


def write_embedding_csv(embedding: Embedding, row_ids, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "x", "y"])
        for rid, (x, y) in zip(row_ids, embedding.coords):
            writer.writerow([rid, _format(x), _format(y)])


def write_labels_csv(clustering: Clustering, row_ids, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "label"])
        for rid, lab in zip(row_ids, clustering.labels):
            writer.writerow([rid, lab])


def write_meta_csv(meta: MetaTable, row_ids, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", *meta.column_order])
        for i, rid in enumerate(row_ids):
            row = [rid]
            for name in meta.column_order:
                if name in meta.categorical:
                    row.append(meta.categorical[name][i])
                else:
                    row.append(_format(meta.numeric[name][i]))
            writer.writerow(row)


def pca_scores(values: np.ndarray, dims: int):
    """Centered principal component scores.

    Returns (scores, components, mean, variance_retained) where `components`
    has one row per retained component. Component signs are fixed so the
    largest-magnitude loading of each component is positive.
    """
    values = np.asarray(values, dtype=float)
    n, p = values.shape
    limit = min(n - 1, p)
    if not 1 <= dims <= limit:
        raise ValueError(f"dims must be in [1, {limit}], got {dims}")
    mean = values.mean(axis=0)
    centered = values - mean
    u, s, vt = np.linalg.svd(centered, full_matrices=False)
    flip = np.sign(vt[np.arange(len(s)), np.argmax(np.abs(vt), axis=1)])
    flip[flip == 0] = 1.0
    vt = vt * flip[:, None]
    u = u * flip[None, :]
    total = float(np.sum(s**2))
    retained = 1.0 if total == 0 else float(np.sum(s[:dims] ** 2) / total)
    scores = u[:, :dims] * s[:dims]
    return scores, vt[:dims], mean, retained


def global_pca(data: Dataset, dims: int) -> tuple[Dataset, float]:
    """Project the dataset onto its top `dims` principal components."""
    scores, _, _, retained = pca_scores(data.values, dims)
    names = tuple(f"pc{i + 1}" for i in range(dims))
    return Dataset(data.row_ids, names, scores), retained
