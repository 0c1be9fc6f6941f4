"""Weighted soft voting over theory classifiers.

The ensemble score of an instance is the weight-normalized sum of the
per-classifier positive-class probabilities; class 1 is predicted iff
the score exceeds 0.5 (ties go to 0, fixed convention). Weights are
learned with Nelder-Mead maximizing average precision on a fitting
split, with negative coordinates clamped to zero inside the objective.
Uniform weights are always evaluated as the incumbent: the fit never
returns weights with a worse fitting-split AP than uniform.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigError, MetricError, ModelFormatError, TrainingError
from .metrics import average_precision, confusion_counts, f1_positive
from .simplex import SimplexSettings, nelder_mead

__all__ = [
    "EnsembleModel",
    "FitWeightsResult",
    "EvaluationReport",
    "ensemble_score",
    "ensemble_predict",
    "fit_weights",
    "evaluate",
    "save_ensemble",
    "load_ensemble",
    "ensemble_to_json_bytes",
]

ENSEMBLE_VERSION = 1
ENSEMBLE_KIND = "soft-voting-ensemble"


@dataclass(eq=False)
class EnsembleModel:
    classifier_names: tuple[str, ...]
    weights: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.classifier_names = tuple(self.classifier_names)
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.ndim != 1:
            raise ConfigError("ensemble weights must be a 1-D vector")
        if len(self.classifier_names) != self.weights.size:
            raise ConfigError(
                f"{len(self.classifier_names)} classifier names but "
                f"{self.weights.size} weights"
            )
        if len(set(self.classifier_names)) != len(self.classifier_names):
            raise ConfigError("duplicate classifier names in ensemble")
        if np.any(self.weights < 0) or not np.all(np.isfinite(self.weights)):
            raise ConfigError("ensemble weights must be finite and >= 0")
        if self.weights.sum() <= 0:
            raise ConfigError("ensemble weights must not all be zero")


def _check_probas(probas: np.ndarray, n_classifiers: int) -> np.ndarray:
    p = np.asarray(probas, dtype=np.float64)
    if p.ndim == 1:
        p = p.reshape(1, -1)
    if p.ndim != 2 or p.shape[1] != n_classifiers:
        raise MetricError(
            f"probas must have {n_classifiers} columns, got shape {p.shape}"
        )
    if not np.all(np.isfinite(p)) or np.any(p < 0) or np.any(p > 1):
        raise MetricError("probas must lie in [0, 1]")
    return p


def ensemble_score(
    weights: Sequence[float], probas: np.ndarray
) -> np.ndarray:
    """Normalized weighted soft vote. `probas` rows are instances,
    columns are classifiers (positive-class probability)."""
    w = np.asarray(weights, dtype=np.float64)
    p = _check_probas(probas, w.size)
    total = w.sum()
    if total <= 0:
        raise MetricError("ensemble_score needs a positive weight total")
    return p @ w / total


def ensemble_predict(scores: np.ndarray) -> np.ndarray:
    """Class per instance: 1 iff score > 0.5 (a tie at exactly 0.5 is
    class 0)."""
    return (np.asarray(scores, dtype=np.float64) > 0.5).astype(np.int64)


@dataclass
class FitWeightsResult:
    model: EnsembleModel
    ap: float
    uniform_ap: float
    iterations: int
    converged: bool
    used_uniform_fallback: bool


def fit_weights(
    probas: np.ndarray,
    labels: Sequence[int],
    classifier_names: Sequence[str],
    settings: SimplexSettings = SimplexSettings(),
) -> FitWeightsResult:
    names = tuple(classifier_names)
    m = len(names)
    if m < 2:
        raise TrainingError("weight fitting needs at least 2 classifiers")
    p = _check_probas(probas, m)
    y = np.asarray(labels)
    if y.size != p.shape[0]:
        raise TrainingError(
            f"labels ({y.size}) and proba rows ({p.shape[0]}) differ"
        )
    if y.size == 0 or y.min() == y.max():
        raise TrainingError("weight fitting needs both classes in the labels")

    def objective(w: np.ndarray) -> float:
        clamped = np.clip(w, 0.0, None)
        if clamped.sum() <= 0:
            return np.inf  # infeasible vertex: no vote at all
        return -average_precision(y, ensemble_score(clamped, p))

    result = nelder_mead(objective, np.ones(m), settings)
    fitted = np.clip(result.x, 0.0, None)
    used_fallback = False
    if fitted.sum() <= 0:
        warnings.warn(
            "weight fitting collapsed to all-zero weights; falling back to uniform",
            stacklevel=2,
        )
        fitted = np.ones(m)
        used_fallback = True
    uniform = np.ones(m)
    uniform_ap = average_precision(y, ensemble_score(uniform, p))
    fitted_ap = average_precision(y, ensemble_score(fitted, p))
    if fitted_ap < uniform_ap:
        # uniform incumbent: never return a worse fitting-split AP
        fitted = uniform
        fitted_ap = uniform_ap
        used_fallback = True
    model = EnsembleModel(
        classifier_names=names,
        weights=fitted,
        diagnostics={
            "fit_ap": fitted_ap,
            "uniform_ap": uniform_ap,
            "iterations": result.iterations,
            "converged": result.converged,
            "used_uniform_fallback": used_fallback,
            "simplex_settings": settings.to_dict(),
        },
    )
    return FitWeightsResult(
        model=model,
        ap=fitted_ap,
        uniform_ap=uniform_ap,
        iterations=result.iterations,
        converged=result.converged,
        used_uniform_fallback=used_fallback,
    )


@dataclass(frozen=True)
class EvaluationReport:
    f1: float
    ap: float
    confusion: dict[str, int]
    per_classifier_f1: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "ensemble": {"f1_positive": self.f1, "average_precision": self.ap},
            "confusion": dict(self.confusion),
            "per_classifier_f1": dict(self.per_classifier_f1),
        }


def evaluate(
    model: EnsembleModel, probas: np.ndarray, labels: Sequence[int]
) -> EvaluationReport:
    p = _check_probas(probas, len(model.classifier_names))
    y = np.asarray(labels)
    if y.size != p.shape[0]:
        raise MetricError(f"labels ({y.size}) and proba rows ({p.shape[0]}) differ")
    if y.size == 0:
        raise MetricError("cannot evaluate on an empty set")
    scores = ensemble_score(model.weights, p)
    predictions = ensemble_predict(scores)
    per_classifier = {
        name: f1_positive(y, ensemble_predict(p[:, j]))
        for j, name in enumerate(model.classifier_names)
    }
    return EvaluationReport(
        f1=f1_positive(y, predictions),
        ap=average_precision(y, scores),
        confusion=confusion_counts(y, predictions),
        per_classifier_f1=per_classifier,
    )


# ---------------------------------------------------------------------------
# serialization


def ensemble_to_json_bytes(model: EnsembleModel) -> bytes:
    doc = {
        "kind": ENSEMBLE_KIND,
        "version": ENSEMBLE_VERSION,
        "classifiers": list(model.classifier_names),
        "weights": [float(w) for w in model.weights],
        "diagnostics": model.diagnostics,
    }
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return (text + "\n").encode("utf-8")


def save_ensemble(model: EnsembleModel, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(ensemble_to_json_bytes(model))


def load_ensemble(path: str) -> EnsembleModel:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except ValueError as exc:
            raise ModelFormatError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict) or doc.get("kind") != ENSEMBLE_KIND:
        raise ModelFormatError(f"{path}: not a {ENSEMBLE_KIND} file")
    if doc.get("version") != ENSEMBLE_VERSION:
        raise ModelFormatError(
            f"{path}: unsupported ensemble version {doc.get('version')!r}; "
            f"this build reads version {ENSEMBLE_VERSION}"
        )
    try:
        return EnsembleModel(
            classifier_names=tuple(doc["classifiers"]),
            weights=np.asarray(doc["weights"], dtype=np.float64),
            diagnostics=doc.get("diagnostics", {}),
        )
    except KeyError as exc:
        raise ModelFormatError(f"{path}: missing ensemble field {exc}") from exc
