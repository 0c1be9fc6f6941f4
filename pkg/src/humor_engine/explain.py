"""Interpretability surface.

Three views of a trained additive model:
  - feature-function export: the per-bin logit table with bag envelopes
    and train-row counts, ready to plot;
  - local explanations: per-instance term contributions that sum with
    the intercept to the prediction logit, exactly when accumulated in
    model term order (entries are listed by contribution magnitude);
  - global importances: weighted mean absolute contribution of each term
    over a reference matrix.

Plus hypothesis overlays: a stylized curve (increasing / decreasing /
step-up / step-down) compared against the learned function, scored by a
count-weighted sign-match statistic restricted to bins whose logit
magnitude exceeds the envelope half-width.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ExplainError
from .ga2m import (
    Ga2mModel,
    TermContribution,
    predict_proba,
    term_contributions,
)
from .matrix import FeatureMatrix

__all__ = [
    "FeatureFunctionView",
    "LocalExplanation",
    "GlobalImportanceReport",
    "OverlayResult",
    "OVERLAY_SHAPES",
    "export_feature_function",
    "explain_local",
    "explain_global",
    "hypothesis_overlay",
]

OVERLAY_SHAPES = ("increasing", "decreasing", "step-up", "step-down")


@dataclass(frozen=True)
class FeatureFunctionView:
    """Plot-ready dump of one main term. Arrays cover the value bins in
    order; the reserved missing bin is reported separately."""

    feature: str
    hypothesis: str
    bin_lower: tuple[float | None, ...]  # None = unbounded below
    bin_upper: tuple[float | None, ...]  # None = unbounded above
    logits: tuple[float, ...]
    env_min: tuple[float, ...]
    env_max: tuple[float, ...]
    counts: tuple[int, ...]
    missing_logit: float
    missing_env_min: float
    missing_env_max: float
    missing_count: int

    def to_dict(self) -> dict:
        return {
            "feature": self.feature,
            "hypothesis": self.hypothesis,
            "bins": [
                {
                    "lower": self.bin_lower[i],
                    "upper": self.bin_upper[i],
                    "logit": self.logits[i],
                    "env_min": self.env_min[i],
                    "env_max": self.env_max[i],
                    "count": self.counts[i],
                }
                for i in range(len(self.logits))
            ],
            "missing": {
                "logit": self.missing_logit,
                "env_min": self.missing_env_min,
                "env_max": self.missing_env_max,
                "count": self.missing_count,
            },
        }


@dataclass(frozen=True)
class LocalExplanation:
    instance_id: str
    proba: float
    logit: float
    intercept: float
    entries: tuple[tuple[str, TermContribution, str], ...]  # (term, contribution, hypothesis)
    truncated_to: int | None

    def to_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "proba": self.proba,
            "logit": self.logit,
            "intercept": self.intercept,
            "top_k": self.truncated_to,
            "terms": [
                {
                    "term": term,
                    "contribution": c.value,
                    "env_min": c.env_min,
                    "env_max": c.env_max,
                    "hypothesis": hypothesis,
                }
                for term, c, hypothesis in self.entries
            ],
        }


@dataclass(frozen=True)
class GlobalImportanceReport:
    entries: tuple[tuple[str, float], ...]  # (term, importance), descending

    def to_dict(self) -> dict:
        return {
            "importances": [
                {"term": term, "importance": value} for term, value in self.entries
            ]
        }


@dataclass(frozen=True)
class OverlayResult:
    shape: str
    magnitude: float
    overlay: tuple[float, ...]  # one value per value bin
    agreement: float

    def to_dict(self) -> dict:
        return {
            "shape": self.shape,
            "magnitude": self.magnitude,
            "overlay": list(self.overlay),
            "agreement": self.agreement,
        }


def export_feature_function(model: Ga2mModel, feature: str) -> FeatureFunctionView:
    if feature not in model.feature_names:
        raise ExplainError(
            f"model has no feature {feature!r}; features: "
            + ", ".join(model.feature_names)
        )
    term = model.main_term(feature)
    cuts = model.cuts[feature]
    counts = model.bin_counts[feature]
    n_value_bins = len(cuts) + 1
    lower: list[float | None] = [None] + [float(c) for c in cuts]
    upper: list[float | None] = [float(c) for c in cuts] + [None]
    return FeatureFunctionView(
        feature=feature,
        hypothesis=model.hypothesis_for(feature),
        bin_lower=tuple(lower),
        bin_upper=tuple(upper),
        logits=tuple(float(v) for v in term.table[:n_value_bins]),
        env_min=tuple(float(v) for v in term.env_min[:n_value_bins]),
        env_max=tuple(float(v) for v in term.env_max[:n_value_bins]),
        counts=tuple(int(c) for c in counts[:n_value_bins]),
        missing_logit=float(term.table[n_value_bins]),
        missing_env_min=float(term.env_min[n_value_bins]),
        missing_env_max=float(term.env_max[n_value_bins]),
        missing_count=int(counts[n_value_bins]),
    )


def explain_local(
    model: Ga2mModel, row: Mapping[str, float | None], instance_id: str = "",
    top_k: int | None = None,
) -> LocalExplanation:
    if top_k is not None and top_k < 0:
        raise ExplainError(f"top_k must be >= 0, got {top_k}")
    contributions = term_contributions(model, row)
    logit = model.intercept
    for c in contributions.values():
        logit += c.value
    # sort by |contribution| descending; stable, so term order breaks ties
    ordered = sorted(
        contributions.items(), key=lambda item: -abs(item[1].value)
    )
    if top_k is not None:
        ordered = ordered[:top_k]
    entries = tuple(
        (
            term,
            contribution,
            _term_hypothesis(model, term),
        )
        for term, contribution in ordered
    )
    return LocalExplanation(
        instance_id=instance_id,
        proba=predict_proba(model, row),
        logit=logit,
        intercept=model.intercept,
        entries=entries,
        truncated_to=top_k,
    )


def _term_hypothesis(model: Ga2mModel, term: str) -> str:
    for part in term.split(" x "):
        hyp = model.hypothesis_for(part)
        if hyp:
            return hyp
    return ""


def explain_global(
    model: Ga2mModel,
    matrix: FeatureMatrix,
    instance_weights: Sequence[float] | None = None,
) -> GlobalImportanceReport:
    n = matrix.n_rows
    if n == 0:
        raise ExplainError("cannot compute global importances on an empty matrix")
    if instance_weights is None:
        weights = np.ones(n, dtype=np.float64)
    else:
        weights = np.asarray(instance_weights, dtype=np.float64)
        if weights.shape != (n,):
            raise ExplainError(
                f"instance_weights length {weights.size} does not match {n} rows"
            )
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise ExplainError("instance_weights must be finite and non-negative")
        if weights.sum() == 0:
            raise ExplainError("instance_weights sum to zero")
    from .binning import assign_bins  # local import to avoid cycle noise

    if set(matrix.feature_names) != set(model.feature_names):
        raise ExplainError("matrix features do not match model features")
    values = matrix.values[
        :, [matrix.feature_names.index(f) for f in model.feature_names]
    ]
    fine = {
        f: assign_bins(values[:, j], model.cuts[f])
        for j, f in enumerate(model.feature_names)
    }
    coarse = {
        f: assign_bins(values[:, j], model.pair_cuts[f])
        for j, f in enumerate(model.feature_names)
    }
    total = weights.sum()
    scores: list[tuple[str, float]] = []
    for term in model.mains:
        contrib = term.table[fine[term.features[0]]]
        scores.append(
            (term.name, float(np.sum(weights * np.abs(contrib)) / total))
        )
    for term in model.pairs:
        contrib = term.table[coarse[term.features[0]], coarse[term.features[1]]]
        scores.append(
            (term.name, float(np.sum(weights * np.abs(contrib)) / total))
        )
    scores.sort(key=lambda item: -item[1])
    return GlobalImportanceReport(entries=tuple(scores))


def _overlay_series(shape: str, magnitude: float, n_bins: int) -> np.ndarray:
    if shape not in OVERLAY_SHAPES:
        raise ExplainError(
            f"unknown overlay shape {shape!r}; valid: {', '.join(OVERLAY_SHAPES)}"
        )
    if not magnitude > 0:
        raise ExplainError(f"overlay magnitude must be positive, got {magnitude}")
    if shape == "increasing":
        return (
            np.linspace(-magnitude, magnitude, n_bins)
            if n_bins > 1
            else np.asarray([magnitude])
        )
    if shape == "decreasing":
        return -_overlay_series("increasing", magnitude, n_bins)
    if shape == "step-up":
        half = n_bins // 2
        out = np.full(n_bins, magnitude)
        out[:half] = -magnitude
        return out
    return -_overlay_series("step-up", magnitude, n_bins)


def hypothesis_overlay(
    view: FeatureFunctionView, shape: str, magnitude: float = 1.0
) -> OverlayResult:
    """Generate the hypothesized curve over the view's value bins and
    score its agreement with the learned function: a count-weighted mean
    of sign matches over bins where the learned logit magnitude exceeds
    the envelope half-width and the overlay takes a side. Ranges over
    [-1, 1]; 0 when no bin qualifies."""
    actual = np.asarray(view.logits, dtype=np.float64)
    overlay = _overlay_series(shape, magnitude, actual.size)
    env_half = (
        np.asarray(view.env_max, dtype=np.float64)
        - np.asarray(view.env_min, dtype=np.float64)
    ) / 2.0
    weights = np.asarray(view.counts, dtype=np.float64)
    eligible = (np.abs(actual) > env_half) & (overlay != 0.0)
    weight_sum = float(weights[eligible].sum())
    if weight_sum == 0.0:
        agreement = 0.0
    else:
        matches = np.sign(actual[eligible]) * np.sign(overlay[eligible])
        agreement = float(np.sum(weights[eligible] * matches) / weight_sum)
    return OverlayResult(
        shape=shape,
        magnitude=float(magnitude),
        overlay=tuple(float(v) for v in overlay),
        agreement=agreement,
    )
