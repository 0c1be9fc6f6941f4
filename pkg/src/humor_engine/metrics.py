"""Evaluation metrics: average precision and positive-class F1.

Average precision follows the rank-wise definition: sort by score
descending (stable, so tied scores keep their original order), then
average precision-at-rank over the positive instances. F1 is reported
for the positive class with the 0-when-undefined convention.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import MetricError

__all__ = ["average_precision", "f1_positive", "confusion_counts"]


def _check_binary(values: Sequence[int], what: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise MetricError(f"{what} must be 1-dimensional")
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise MetricError(f"{what} must contain only 0 and 1")
    return arr.astype(np.int64)


def average_precision(labels: Sequence[int], scores: Sequence[float]) -> float:
    y = _check_binary(labels, "labels")
    s = np.asarray(scores, dtype=np.float64)
    if s.shape != y.shape:
        raise MetricError(
            f"labels ({y.size}) and scores ({s.size}) differ in length"
        )
    if not np.all(np.isfinite(s)):
        raise MetricError("scores must be finite")
    n_pos = int(y.sum())
    if n_pos == 0:
        raise MetricError("average precision undefined: no positive labels")
    order = np.argsort(-s, kind="stable")
    sorted_y = y[order]
    cum_pos = np.cumsum(sorted_y)
    ranks = np.arange(1, y.size + 1)
    at_positives = sorted_y == 1
    return float(np.sum(cum_pos[at_positives] / ranks[at_positives]) / n_pos)


def confusion_counts(
    labels: Sequence[int], predictions: Sequence[int]
) -> dict[str, int]:
    y = _check_binary(labels, "labels")
    p = _check_binary(predictions, "predictions")
    if p.shape != y.shape:
        raise MetricError(
            f"labels ({y.size}) and predictions ({p.size}) differ in length"
        )
    return {
        "tp": int(np.sum((y == 1) & (p == 1))),
        "fp": int(np.sum((y == 0) & (p == 1))),
        "fn": int(np.sum((y == 1) & (p == 0))),
        "tn": int(np.sum((y == 0) & (p == 0))),
    }


def f1_positive(labels: Sequence[int], predictions: Sequence[int]) -> float:
    c = confusion_counts(labels, predictions)
    denom = 2 * c["tp"] + c["fp"] + c["fn"]
    if denom == 0:
        return 0.0
    return float(2 * c["tp"] / denom)
