"""Tool adapters: raw texts to per-token channel time series.

Given texts and a tools configuration, each tool scores either every
token prefix (subsequence mode) or each token (token mode), producing
one time series per channel per instance, written as corpus JSONL for
the downstream feature extractor.
"""

from .backends import Scorer, ToyScorer, load_backend, register_backend
from .errors import AdapterError, BackendError, TextsFormatError, ToolConfigError
from .extract import DEFAULT_MAX_TOKENS, ExtractionReport, extract_channels
from .spec import (
    ROLE_TABLE,
    AdapterSpec,
    list_tools,
    read_tools_config,
    spec_from_dict,
)
from .textio import TextInstance, read_texts, validate_record, write_corpus_jsonl
from .tokenizer import BpeTokenizer, default_tokenizer, learn_merges

__all__ = [
    "AdapterError",
    "AdapterSpec",
    "BackendError",
    "BpeTokenizer",
    "DEFAULT_MAX_TOKENS",
    "ExtractionReport",
    "ROLE_TABLE",
    "Scorer",
    "TextInstance",
    "TextsFormatError",
    "ToolConfigError",
    "ToyScorer",
    "default_tokenizer",
    "extract_channels",
    "learn_merges",
    "list_tools",
    "load_backend",
    "read_texts",
    "read_tools_config",
    "register_backend",
    "spec_from_dict",
    "validate_record",
    "write_corpus_jsonl",
]
