"""Input texts CSV and output corpus JSONL.

Input: a CSV with header `id,text` or `id,text,label`; labels are 0, 1,
or empty (unlabeled). Output: JSON lines, one instance per line, in the
channel corpus format consumed by the downstream feature extractor:

    {"id":"t1","label":1,"channels":{"anger":[0.1,0.7]}}

`label` is omitted for unlabeled instances. Writing is deterministic:
fixed key order, compact separators, repr-exact floats.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

from .errors import AdapterError, TextsFormatError

__all__ = ["TextInstance", "read_texts", "write_corpus_jsonl", "validate_record"]


@dataclass(frozen=True)
class TextInstance:
    id: str
    text: str
    label: int | None


def read_texts(path: str) -> list[TextInstance]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TextsFormatError(f"{path}: empty file") from None
        if header not in (["id", "text"], ["id", "text", "label"]):
            raise TextsFormatError(
                f"{path}: header must be id,text or id,text,label, got {header}"
            )
        has_label = len(header) == 3
        out: list[TextInstance] = []
        seen: set[str] = set()
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise TextsFormatError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
                )
            instance_id = row[0]
            if not instance_id:
                raise TextsFormatError(f"{path}:{lineno}: empty id")
            if instance_id in seen:
                raise TextsFormatError(f"{path}:{lineno}: duplicate id {instance_id!r}")
            seen.add(instance_id)
            label: int | None = None
            if has_label and row[2] != "":
                if row[2] not in ("0", "1"):
                    raise TextsFormatError(
                        f"{path}:{lineno}: label must be 0, 1, or empty, got {row[2]!r}"
                    )
                label = int(row[2])
            out.append(TextInstance(id=instance_id, text=row[1], label=label))
    return out


def validate_record(record: dict) -> None:
    """Check one output record against the corpus format contract."""
    if set(record) - {"id", "label", "channels"}:
        raise AdapterError(f"unexpected record keys: {sorted(record)}")
    if not isinstance(record.get("id"), str) or not record["id"]:
        raise AdapterError("record id must be a non-empty string")
    label = record.get("label")
    if label is not None and label not in (0, 1):
        raise AdapterError(f"record {record['id']!r}: label must be 0, 1, or None")
    channels = record.get("channels")
    if not isinstance(channels, dict) or not channels:
        raise AdapterError(f"record {record['id']!r}: channels must be a non-empty dict")
    for name, series in channels.items():
        if not isinstance(name, str) or not name:
            raise AdapterError(f"record {record['id']!r}: bad channel name {name!r}")
        if not isinstance(series, list) or not series:
            raise AdapterError(
                f"record {record['id']!r}: channel {name!r} must be a non-empty list"
            )
        for value in series:
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise AdapterError(
                    f"record {record['id']!r}: channel {name!r} has non-numeric value"
                )
            if not math.isfinite(value):
                raise AdapterError(
                    f"record {record['id']!r}: channel {name!r} has non-finite value"
                )


def write_corpus_jsonl(records: list[dict], path: str) -> None:
    for record in records:
        validate_record(record)
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            obj: dict[str, object] = {"id": record["id"]}
            if record.get("label") is not None:
                obj["label"] = record["label"]
            obj["channels"] = record["channels"]
            fh.write(json.dumps(obj, separators=(",", ":"), sort_keys=False))
            fh.write("\n")
