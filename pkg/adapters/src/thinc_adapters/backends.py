"""Scorer backends.

A backend resolves a `scheme://name` model identifier to a scorer
object. Scorers run in evaluation mode with no sampling, so a given
model identifier and input always produce the same numbers.

The built-in `toy` scheme needs no downloads: it derives every score
from a keyed hash of the inputs. It exists so the extraction pipeline,
its output format, and its determinism can be exercised offline; the
numbers carry no linguistic meaning. Production schemes (wrapping real
pretrained checkpoints) register themselves via `register_backend`.
"""

from __future__ import annotations

import hashlib
import math
from typing import Callable, Protocol, Sequence

from .errors import BackendError

__all__ = ["Scorer", "ToyScorer", "register_backend", "load_backend"]

EMBEDDING_DIM = 8
RELATED_WORDS = 5


class Scorer(Protocol):
    def class_probabilities_batch(
        self, token_seqs: Sequence[Sequence[str]], classes: Sequence[str]
    ) -> list[list[float]]:
        """One probability row per token sequence; each row sums to 1
        over `classes`."""

    def next_token_probability(self, prefix: Sequence[str], token: str) -> float:
        """Probability of `token` following `prefix`, in [0, 1]."""

    def related_word_embeddings(self, token: str) -> list[tuple[float, ...]]:
        """Embeddings of the token's top related words."""

    def top_pos_confidence(self, token: str) -> float:
        """Confidence of the most likely part-of-speech tag, in [0, 1]."""


class ToyScorer:
    """Deterministic offline scorer keyed by the model name."""

    def __init__(self, name: str):
        self._key = name.encode("utf-8")[:64]

    def _unit(self, *parts: str) -> float:
        payload = "\x1f".join(parts).encode("utf-8")
        digest = hashlib.blake2b(payload, digest_size=8, key=self._key).digest()
        return int.from_bytes(digest, "big") / 2**64

    def class_probabilities_batch(
        self, token_seqs: Sequence[Sequence[str]], classes: Sequence[str]
    ) -> list[list[float]]:
        rows: list[list[float]] = []
        for tokens in token_seqs:
            joined = "\x1e".join(tokens)
            logits = [3.0 * self._unit("cls", c, joined) for c in classes]
            peak = max(logits)
            weights = [math.exp(v - peak) for v in logits]
            total = sum(weights)
            rows.append([w / total for w in weights])
        return rows

    def next_token_probability(self, prefix: Sequence[str], token: str) -> float:
        return self._unit("lm", token, "\x1e".join(prefix))

    def related_word_embeddings(self, token: str) -> list[tuple[float, ...]]:
        vectors = []
        for i in range(RELATED_WORDS):
            vectors.append(
                tuple(
                    2.0 * self._unit("emb", token, str(i), str(j)) - 1.0
                    for j in range(EMBEDDING_DIM)
                )
            )
        return vectors

    def top_pos_confidence(self, token: str) -> float:
        return self._unit("pos", token)


_BACKENDS: dict[str, Callable[[str], Scorer]] = {}


def register_backend(scheme: str, factory: Callable[[str], Scorer]) -> None:
    _BACKENDS[scheme] = factory


def load_backend(model_id: str) -> Scorer:
    if "://" not in model_id:
        raise BackendError(
            f"model identifier must look like scheme://name, got {model_id!r}"
        )
    scheme, name = model_id.split("://", 1)
    if scheme not in _BACKENDS:
        known = ", ".join(sorted(_BACKENDS)) or "none"
        raise BackendError(
            f"no backend registered for scheme {scheme!r} (registered: {known})"
        )
    try:
        return _BACKENDS[scheme](name)
    except BackendError:
        raise
    except Exception as exc:
        raise BackendError(f"backend {scheme!r} failed to load {name!r}: {exc}") from exc


register_backend("toy", ToyScorer)
