"""Exception hierarchy for the adapters package."""

__all__ = [
    "AdapterError",
    "ToolConfigError",
    "BackendError",
    "TextsFormatError",
]


class AdapterError(Exception):
    """Base class for anticipated adapter failures."""


class ToolConfigError(AdapterError):
    """A tool entry or tools.yaml file is invalid."""


class BackendError(AdapterError):
    """A scorer backend cannot be resolved or loaded."""


class TextsFormatError(AdapterError):
    """The input texts CSV is malformed."""
