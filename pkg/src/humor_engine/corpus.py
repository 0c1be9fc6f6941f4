"""Corpus I/O.

A corpus is a JSON-lines file. Each line is one object:

    {"id": "t1", "label": 1, "channels": {"anger": [0.1, 0.7, 0.8]}}

`label` is optional (omitted or null for unlabeled instances). Each
channel maps a name to a non-empty list of finite floats; channels may
differ in length within one instance. Reading is strict and reports the
offending line number; writing is deterministic so that equal corpora
produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import CorpusFormatError

__all__ = [
    "InstanceRecord",
    "read_corpus",
    "write_corpus",
    "class_counts",
]


@dataclass(frozen=True)
class InstanceRecord:
    """One text instance: an id, an optional binary label, and per-tool
    time series keyed by channel name."""

    id: str
    label: int | None
    channels: Mapping[str, tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise CorpusFormatError("instance id must be a non-empty string")
        if isinstance(self.label, bool) or self.label not in (0, 1, None):
            raise CorpusFormatError(
                f"instance {self.id!r}: label must be 0 or 1 (or absent), got {self.label!r}"
            )
        frozen: dict[str, tuple[float, ...]] = {}
        for name, series in dict(self.channels).items():
            _check_channel(self.id, name, series)
            frozen[name] = tuple(float(v) for v in series)
        object.__setattr__(self, "channels", frozen)


def _check_channel(instance_id: str, name: object, series: object) -> None:
    if not isinstance(name, str) or not name:
        raise CorpusFormatError(
            f"instance {instance_id!r}: channel names must be non-empty strings"
        )
    if not isinstance(series, (list, tuple)) or len(series) == 0:
        raise CorpusFormatError(
            f"instance {instance_id!r}: channel {name!r} must be a non-empty list of numbers"
        )
    for pos, value in enumerate(series):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise CorpusFormatError(
                f"instance {instance_id!r}: channel {name!r} position {pos} is not a number"
            )
        if not math.isfinite(value):
            raise CorpusFormatError(
                f"instance {instance_id!r}: channel {name!r} position {pos} is not finite"
            )


def _pairs_to_object(pairs: list[tuple[str, object]]) -> dict[str, object]:
    # json.loads silently keeps the last value for duplicate keys; catch
    # duplicates explicitly so corrupt files fail loudly.
    obj: dict[str, object] = {}
    for key, value in pairs:
        if key in obj:
            raise ValueError(f"duplicate key {key!r}")
        obj[key] = value
    return obj


def read_corpus(path: str) -> list[InstanceRecord]:
    """Read and validate a JSONL corpus. Raises CorpusFormatError with a
    1-based line number on the first violation."""
    records: list[InstanceRecord] = []
    seen_ids: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                raise CorpusFormatError(f"{path}: line {lineno}: blank line")
            try:
                obj = json.loads(line, object_pairs_hook=_pairs_to_object)
            except ValueError as exc:
                raise CorpusFormatError(
                    f"{path}: line {lineno}: invalid JSON ({exc})"
                ) from exc
            if not isinstance(obj, dict):
                raise CorpusFormatError(
                    f"{path}: line {lineno}: expected a JSON object"
                )
            unknown = set(obj) - {"id", "label", "channels"}
            if unknown:
                raise CorpusFormatError(
                    f"{path}: line {lineno}: unknown fields {sorted(unknown)}"
                )
            if "id" not in obj:
                raise CorpusFormatError(f"{path}: line {lineno}: missing 'id'")
            if "channels" not in obj:
                raise CorpusFormatError(f"{path}: line {lineno}: missing 'channels'")
            if not isinstance(obj["channels"], dict):
                raise CorpusFormatError(
                    f"{path}: line {lineno}: 'channels' must be an object"
                )
            label = obj.get("label")
            try:
                record = InstanceRecord(
                    id=obj["id"],
                    label=label,
                    channels=obj["channels"],
                )
            except CorpusFormatError as exc:
                raise CorpusFormatError(f"{path}: line {lineno}: {exc}") from exc
            if record.id in seen_ids:
                raise CorpusFormatError(
                    f"{path}: line {lineno}: duplicate id {record.id!r}"
                )
            seen_ids.add(record.id)
            records.append(record)
    return records


def write_corpus(records: Iterable[InstanceRecord], path: str) -> None:
    """Write records as JSONL. Field order and float formatting are fixed,
    so identical records always produce identical bytes."""
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            obj: dict[str, object] = {"id": record.id}
            if record.label is not None:
                obj["label"] = record.label
            obj["channels"] = {
                name: list(series) for name, series in record.channels.items()
            }
            fh.write(json.dumps(obj, separators=(",", ":"), sort_keys=False))
            fh.write("\n")


def class_counts(records: Iterable[InstanceRecord]) -> tuple[int, int, int]:
    """Return (positives, negatives, unlabeled)."""
    pos = neg = unlabeled = 0
    for record in records:
        if record.label == 1:
            pos += 1
        elif record.label == 0:
            neg += 1
        else:
            unlabeled += 1
    return pos, neg, unlabeled
