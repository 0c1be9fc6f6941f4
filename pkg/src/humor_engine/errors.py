"""Exception hierarchy for the engine.

Every anticipated failure raises a subclass of EngineError with an
actionable message. The CLI maps EngineError to exit code 2 and anything
else (a bug) to exit code 1.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all anticipated failures."""


class CorpusFormatError(EngineError):
    """A corpus file violates the JSONL instance schema."""


class ConfigError(EngineError):
    """A theory configuration or settings document is invalid."""


class MatrixFormatError(EngineError):
    """A feature matrix CSV violates the expected layout."""


class CalculatorError(EngineError):
    """A calculator name or parameter set is invalid."""


class TrainingError(EngineError):
    """Classifier training cannot proceed (bad labels, empty data, ...)."""


class ModelFormatError(EngineError):
    """A serialized model or ensemble file is malformed or incompatible."""


class PredictionError(EngineError):
    """A prediction request does not match the model's features."""


class MetricError(EngineError):
    """A metric is undefined for the given inputs."""


class ExplainError(EngineError):
    """An explanation request does not match the model or data."""
