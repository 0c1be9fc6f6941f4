"""Feature matrices on disk.

CSV with header `id,label,<feature...>`. Missing values are empty cells;
unlabeled rows have an empty label cell. Floats are serialized with
shortest round-trip precision (repr), so write -> read -> write is
byte-identical.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import MatrixFormatError

__all__ = [
    "FeatureMatrix",
    "read_feature_matrix",
    "write_feature_matrix",
    "read_labels",
    "write_labels",
]


@dataclass
class FeatureMatrix:
    """Rows = instances, columns = named proxy features. `values` is a
    float64 array with NaN marking missing cells; labels hold None for
    unlabeled rows."""

    feature_names: tuple[str, ...]
    ids: tuple[str, ...]
    labels: tuple[int | None, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.feature_names = tuple(self.feature_names)
        self.ids = tuple(self.ids)
        self.labels = tuple(self.labels)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise MatrixFormatError("matrix values must be 2-dimensional")
        n, d = self.values.shape
        if len(self.ids) != n or len(self.labels) != n:
            raise MatrixFormatError(
                f"matrix has {n} value rows but {len(self.ids)} ids and "
                f"{len(self.labels)} labels"
            )
        if len(self.feature_names) != d:
            raise MatrixFormatError(
                f"matrix has {d} value columns but {len(self.feature_names)} feature names"
            )
        if len(set(self.feature_names)) != d:
            raise MatrixFormatError("duplicate feature names in matrix")
        if len(set(self.ids)) != n:
            raise MatrixFormatError("duplicate instance ids in matrix")
        for label in self.labels:
            if label not in (0, 1, None) or isinstance(label, bool):
                raise MatrixFormatError(
                    f"matrix labels must be 0, 1, or None, got {label!r}"
                )
        if np.isinf(self.values).any():
            raise MatrixFormatError("matrix values must be finite or NaN")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def column(self, feature: str) -> np.ndarray:
        try:
            j = self.feature_names.index(feature)
        except ValueError:
            raise MatrixFormatError(f"matrix has no feature {feature!r}") from None
        return self.values[:, j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureMatrix):
            return NotImplemented
        return (
            self.feature_names == other.feature_names
            and self.ids == other.ids
            and self.labels == other.labels
            and np.array_equal(self.values, other.values, equal_nan=True)
        )


def _format_cell(value: float) -> str:
    if np.isnan(value):
        return ""
    return repr(float(value))


def write_feature_matrix(matrix: FeatureMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "label", *matrix.feature_names])
        for i in range(matrix.n_rows):
            label = matrix.labels[i]
            row = [
                matrix.ids[i],
                "" if label is None else str(label),
                *(_format_cell(v) for v in matrix.values[i]),
            ]
            writer.writerow(row)


def read_feature_matrix(path: str) -> FeatureMatrix:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MatrixFormatError(f"{path}: empty file") from None
        if len(header) < 2 or header[0] != "id" or header[1] != "label":
            raise MatrixFormatError(
                f"{path}: header must start with 'id,label', got {header[:2]}"
            )
        feature_names = tuple(header[2:])
        ids: list[str] = []
        labels: list[int | None] = []
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise MatrixFormatError(
                    f"{path}: line {lineno}: expected {len(header)} cells, got {len(row)}"
                )
            ids.append(row[0])
            label_cell = row[1]
            if label_cell == "":
                labels.append(None)
            elif label_cell in ("0", "1"):
                labels.append(int(label_cell))
            else:
                raise MatrixFormatError(
                    f"{path}: line {lineno}: label must be '', '0', or '1', got {label_cell!r}"
                )
            parsed: list[float] = []
            for col, cell in enumerate(row[2:]):
                if cell == "":
                    parsed.append(np.nan)
                    continue
                try:
                    value = float(cell)
                except ValueError:
                    raise MatrixFormatError(
                        f"{path}: line {lineno}: column {feature_names[col]!r}: "
                        f"non-numeric cell {cell!r}"
                    ) from None
                if not np.isfinite(value):
                    raise MatrixFormatError(
                        f"{path}: line {lineno}: column {feature_names[col]!r}: "
                        f"non-finite value {cell!r}"
                    )
                parsed.append(value)
            rows.append(parsed)
    values = (
        np.asarray(rows, dtype=np.float64)
        if rows
        else np.empty((0, len(feature_names)), dtype=np.float64)
    )
    return FeatureMatrix(
        feature_names=feature_names,
        ids=tuple(ids),
        labels=tuple(labels),
        values=values,
    )


def read_labels(path: str) -> dict[str, int]:
    """Read a label file: CSV with header `id,label`, labels 0 or 1."""
    out: dict[str, int] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MatrixFormatError(f"{path}: empty file") from None
        if header != ["id", "label"]:
            raise MatrixFormatError(
                f"{path}: header must be 'id,label', got {header}"
            )
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise MatrixFormatError(
                    f"{path}: line {lineno}: expected 2 cells, got {len(row)}"
                )
            instance_id, label_cell = row
            if not instance_id:
                raise MatrixFormatError(f"{path}: line {lineno}: empty id")
            if instance_id in out:
                raise MatrixFormatError(
                    f"{path}: line {lineno}: duplicate id {instance_id!r}"
                )
            if label_cell not in ("0", "1"):
                raise MatrixFormatError(
                    f"{path}: line {lineno}: label must be 0 or 1, got {label_cell!r}"
                )
            out[instance_id] = int(label_cell)
    return out


def write_labels(labels: dict[str, int], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "label"])
        for instance_id, label in labels.items():
            writer.writerow([instance_id, str(label)])

