"""Soft-voting ensemble: scoring, weight fitting, evaluation, and IO."""

from __future__ import annotations

import numpy as np
import pytest

import oracles
from humor_engine import (
    ConfigError,
    EnsembleModel,
    MetricError,
    TrainingError,
    average_precision,
    ensemble_predict,
    ensemble_score,
    evaluate,
    fit_weights,
    load_ensemble,
    save_ensemble,
)
from humor_engine.ensemble import ensemble_to_json_bytes


def two_col_probas():
    rng = np.random.default_rng(4)
    n = 120
    labels = rng.integers(0, 2, n)
    good = np.clip(labels + rng.normal(0, 0.25, n), 0, 1)
    noisy = np.clip(labels + rng.normal(0, 1.2, n), 0, 1)
    return np.column_stack([good, noisy]), labels


# ---------------------------------------------------------------------------
# scoring


def test_score_is_weighted_average():
    probas = np.array([[0.2, 0.8], [1.0, 0.0]])
    scores = ensemble_score([3.0, 1.0], probas)
    np.testing.assert_allclose(scores, [(0.6 + 0.8) / 4, 3.0 / 4])


def test_score_invariant_under_weight_rescaling():
    probas = np.array([[0.2, 0.8], [0.6, 0.4], [0.9, 0.5]])
    a = ensemble_score([1.0, 3.0], probas)
    b = ensemble_score([2.0, 6.0], probas)
    np.testing.assert_allclose(a, b, atol=1e-15)


def test_predict_threshold_and_tie():
    assert list(ensemble_predict(np.array([0.4999, 0.5, 0.5001]))) == [0, 0, 1]


def test_single_weight_vote_equals_that_classifier():
    probas = np.array([[0.2, 0.8], [0.6, 0.4]])
    np.testing.assert_allclose(
        ensemble_score([1.0, 0.0], probas), probas[:, 0], atol=1e-15
    )


def test_weighted_vote_equals_probability_argmax():
    # weighted vote over both class columns: with p0 = 1 - p1 per
    # classifier, thresholding the weighted positive probability at 0.5 is
    # the same as picking the class with the larger weighted sum
    rng = np.random.default_rng(11)
    probas = rng.uniform(0, 1, (60, 3))
    weights = np.array([0.7, 1.1, 0.2])
    scores = ensemble_score(weights, probas)
    pos_mass = probas @ weights
    neg_mass = (1.0 - probas) @ weights
    argmax_class = (pos_mass > neg_mass).astype(int)
    np.testing.assert_array_equal(ensemble_predict(scores), argmax_class)


def test_score_validates_inputs():
    with pytest.raises(MetricError):
        ensemble_score([1.0, 1.0], np.array([[0.5, 1.5]]))  # out of range
    with pytest.raises(MetricError):
        ensemble_score([1.0], np.array([[0.5, 0.5]]))  # wrong width
    with pytest.raises(MetricError):
        ensemble_score([0.0, 0.0], np.array([[0.5, 0.5]]))  # zero total


# ---------------------------------------------------------------------------
# model validation


def test_model_validation():
    with pytest.raises(ConfigError, match="names but"):
        EnsembleModel(classifier_names=("a",), weights=np.ones(2))
    with pytest.raises(ConfigError, match="duplicate"):
        EnsembleModel(classifier_names=("a", "a"), weights=np.ones(2))
    with pytest.raises(ConfigError, match="finite"):
        EnsembleModel(classifier_names=("a", "b"), weights=np.array([1.0, -0.1]))
    with pytest.raises(ConfigError, match="all be zero"):
        EnsembleModel(classifier_names=("a", "b"), weights=np.zeros(2))


# ---------------------------------------------------------------------------
# weight fitting


def test_fit_weights_beats_or_matches_uniform():
    probas, labels = two_col_probas()
    result = fit_weights(probas, labels, ("good", "noisy"))
    assert result.ap >= result.uniform_ap - 1e-12
    fitted_ap = average_precision(
        labels, ensemble_score(result.model.weights, probas)
    )
    assert fitted_ap == pytest.approx(result.ap, abs=1e-12)


def test_fit_weights_prefers_informative_classifier():
    probas, labels = two_col_probas()
    result = fit_weights(probas, labels, ("good", "noisy"))
    w = result.model.weights
    assert w[0] > w[1]


def test_fit_weights_deterministic():
    probas, labels = two_col_probas()
    a = fit_weights(probas, labels, ("g", "n"))
    b = fit_weights(probas, labels, ("g", "n"))
    assert np.array_equal(a.model.weights, b.model.weights)
    assert a.iterations == b.iterations


def test_fit_weights_requires_both_classes():
    probas = np.full((4, 2), 0.5)
    with pytest.raises(TrainingError, match="both classes"):
        fit_weights(probas, [1, 1, 1, 1], ("a", "b"))


def test_fit_weights_requires_two_classifiers():
    with pytest.raises(TrainingError, match="at least 2"):
        fit_weights(np.full((4, 1), 0.5), [0, 1, 0, 1], ("solo",))


def test_fit_weights_diagnostics_recorded():
    probas, labels = two_col_probas()
    result = fit_weights(probas, labels, ("good", "noisy"))
    diag = result.model.diagnostics
    assert diag["fit_ap"] == pytest.approx(result.ap)
    assert diag["uniform_ap"] == pytest.approx(result.uniform_ap)
    assert isinstance(diag["iterations"], int)


# ---------------------------------------------------------------------------
# evaluation


def test_evaluate_report():
    probas, labels = two_col_probas()
    model = EnsembleModel(classifier_names=("good", "noisy"), weights=np.ones(2))
    report = evaluate(model, probas, labels)
    scores = ensemble_score(model.weights, probas)
    preds = ensemble_predict(scores)
    assert report.f1 == pytest.approx(
        oracles.f1_positive(labels.tolist(), preds.tolist())
    )
    assert report.ap == pytest.approx(
        oracles.average_precision(labels.tolist(), scores.tolist()), abs=1e-12
    )
    tp, fp, fn, tn = oracles.confusion(labels.tolist(), preds.tolist())
    assert report.confusion == {"tp": tp, "fp": fp, "fn": fn, "tn": tn}
    assert set(report.per_classifier_f1) == {"good", "noisy"}
    doc = report.to_dict()
    assert doc["ensemble"]["f1_positive"] == pytest.approx(report.f1)
    assert doc["confusion"] == report.confusion


# ---------------------------------------------------------------------------
# serialization


def test_save_load_round_trip(tmp_path):
    model = EnsembleModel(
        classifier_names=("incongruity", "relief"),
        weights=np.array([1.25, 0.5]),
        diagnostics={"fit_ap": 0.9},
    )
    path = tmp_path / "ensemble.json"
    save_ensemble(model, path)
    back = load_ensemble(path)
    assert back.classifier_names == model.classifier_names
    np.testing.assert_array_equal(back.weights, model.weights)
    assert ensemble_to_json_bytes(back) == ensemble_to_json_bytes(model)


def test_load_rejects_other_files(tmp_path):
    path = tmp_path / "bogus.json"
    path.write_text('{"kind":"something-else","version":1}')
    from humor_engine import ModelFormatError

    with pytest.raises(ModelFormatError, match="not a"):
        load_ensemble(path)
