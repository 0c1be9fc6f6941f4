"""Interpretable humor classification from per-token time series.

Pipeline: tool channels (JSONL corpus) -> theory-specific proxy features
(statistical calculators over each channel) -> additive classifiers with
pairwise interactions -> weighted soft-voting ensemble -> faithful
explanations (feature functions with uncertainty envelopes, local
contributions, global importances, hypothesis overlays).
"""

from .binning import assign_bins, coarsen_cuts, equal_frequency_cuts
from .calculators import (
    CATALOG,
    calculator_names,
    count_cwt_peaks,
    evaluate_calculator,
    normalize_params,
)
from .corpus import InstanceRecord, class_counts, read_corpus, write_corpus
from .ensemble import (
    EnsembleModel,
    EvaluationReport,
    ensemble_predict,
    ensemble_score,
    evaluate,
    fit_weights,
    load_ensemble,
    save_ensemble,
)
from .errors import (
    CalculatorError,
    ConfigError,
    CorpusFormatError,
    EngineError,
    ExplainError,
    MatrixFormatError,
    MetricError,
    ModelFormatError,
    PredictionError,
    TrainingError,
)
from .explain import (
    FeatureFunctionView,
    GlobalImportanceReport,
    LocalExplanation,
    OverlayResult,
    explain_global,
    explain_local,
    export_feature_function,
    hypothesis_overlay,
)
from .featurize import FeaturizationReport, featurize
from .ga2m import (
    Ga2mModel,
    TrainSettings,
    build_bins,
    load_model,
    predict_logit,
    predict_matrix_logits,
    predict_matrix_probas,
    predict_proba,
    save_model,
    term_contributions,
    train,
)
from .matrix import (
    FeatureMatrix,
    read_feature_matrix,
    read_labels,
    write_feature_matrix,
    write_labels,
)
from .metrics import average_precision, confusion_counts, f1_positive
from .simplex import SimplexResult, SimplexSettings, nelder_mead
from .specs import (
    ProxyFeatureSpec,
    TheoryConfig,
    feature_name,
    load_shipped_config,
    read_theory_config,
    shipped_config_names,
    theory_config_from_dict,
    theory_config_to_dict,
    write_theory_config,
)
from .synth import DEFAULT_CHANNELS, SynthSpec, generate

__all__ = [
    "CATALOG",
    "CalculatorError",
    "ConfigError",
    "CorpusFormatError",
    "DEFAULT_CHANNELS",
    "EngineError",
    "EnsembleModel",
    "EvaluationReport",
    "ExplainError",
    "FeatureFunctionView",
    "FeatureMatrix",
    "FeaturizationReport",
    "Ga2mModel",
    "GlobalImportanceReport",
    "InstanceRecord",
    "LocalExplanation",
    "MatrixFormatError",
    "MetricError",
    "ModelFormatError",
    "OverlayResult",
    "PredictionError",
    "ProxyFeatureSpec",
    "SimplexResult",
    "SimplexSettings",
    "SynthSpec",
    "TheoryConfig",
    "TrainSettings",
    "TrainingError",
    "assign_bins",
    "average_precision",
    "build_bins",
    "calculator_names",
    "class_counts",
    "coarsen_cuts",
    "confusion_counts",
    "count_cwt_peaks",
    "ensemble_predict",
    "ensemble_score",
    "equal_frequency_cuts",
    "evaluate",
    "evaluate_calculator",
    "explain_global",
    "explain_local",
    "export_feature_function",
    "f1_positive",
    "feature_name",
    "featurize",
    "fit_weights",
    "generate",
    "hypothesis_overlay",
    "load_ensemble",
    "load_model",
    "load_shipped_config",
    "nelder_mead",
    "normalize_params",
    "predict_logit",
    "predict_matrix_logits",
    "predict_matrix_probas",
    "predict_proba",
    "read_corpus",
    "read_feature_matrix",
    "read_labels",
    "read_theory_config",
    "save_ensemble",
    "save_model",
    "shipped_config_names",
    "term_contributions",
    "theory_config_from_dict",
    "theory_config_to_dict",
    "train",
    "write_corpus",
    "write_feature_matrix",
    "write_labels",
    "write_theory_config",
]
