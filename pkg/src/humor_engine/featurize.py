"""Feature extraction: apply a theory config to a corpus.

Each instance becomes one matrix row; each ProxyFeatureSpec one column.
A cell is missing when the instance lacks the channel or the calculator
is undefined on that series. Extraction is stateless per instance, so
row order is corpus order and results are independent of batching.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .calculators import CATALOG
from .corpus import InstanceRecord
from .matrix import FeatureMatrix
from .specs import TheoryConfig, feature_name

__all__ = ["FeatureSummary", "FeaturizationReport", "featurize"]


@dataclass(frozen=True)
class FeatureSummary:
    missing_rate: float
    minimum: float | None
    maximum: float | None
    mean: float | None


@dataclass(frozen=True)
class FeaturizationReport:
    n_instances: int
    per_feature: Mapping[str, FeatureSummary]
    absent_channel_counts: Mapping[str, int]

    def to_dict(self) -> dict:
        return {
            "n_instances": self.n_instances,
            "per_feature": {
                name: {
                    "missing_rate": s.missing_rate,
                    "min": s.minimum,
                    "max": s.maximum,
                    "mean": s.mean,
                }
                for name, s in self.per_feature.items()
            },
            "absent_channel_counts": dict(self.absent_channel_counts),
        }


def featurize(
    corpus: Sequence[InstanceRecord], config: TheoryConfig
) -> tuple[FeatureMatrix, FeaturizationReport]:
    names = tuple(config.feature_names())
    n = len(corpus)
    values = np.full((n, len(names)), np.nan, dtype=np.float64)
    channels_used = sorted({spec.channel for spec in config.features})
    absent_counts = {channel: 0 for channel in channels_used}
    for i, record in enumerate(corpus):
        for channel in channels_used:
            if channel not in record.channels:
                absent_counts[channel] += 1
        for j, spec in enumerate(config.features):
            series = record.channels.get(spec.channel)
            if series is None:
                continue
            result = CATALOG[spec.calculator].fn(
                np.asarray(series, dtype=np.float64), **spec.params
            )
            if result is not None and np.isfinite(result):
                values[i, j] = float(result)
    matrix = FeatureMatrix(
        feature_names=names,
        ids=tuple(r.id for r in corpus),
        labels=tuple(r.label for r in corpus),
        values=values,
    )
    per_feature: dict[str, FeatureSummary] = {}
    for j, spec in enumerate(config.features):
        col = values[:, j]
        present = col[~np.isnan(col)]
        per_feature[feature_name(spec)] = FeatureSummary(
            missing_rate=float(np.isnan(col).mean()) if n else 0.0,
            minimum=float(present.min()) if present.size else None,
            maximum=float(present.max()) if present.size else None,
            mean=float(present.mean()) if present.size else None,
        )
    report = FeaturizationReport(
        n_instances=n,
        per_feature=per_feature,
        absent_channel_counts=absent_counts,
    )
    return matrix, report
