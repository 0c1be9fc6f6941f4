"""Channel extraction: run every configured tool over every text.

Subsequence tools feed the scorer the first k tokens for k = 1..n and
record per-class probabilities at each k, so channel length equals token
count. Token tools score position k from the token there (plus its
prefix for the language-model tool). A per-instance token cap bounds the
quadratic cost of prefix scoring.

Instances whose text yields no tokens cannot produce the non-empty
series the corpus format requires; they are skipped and logged by id.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .backends import Scorer, load_backend
from .errors import ToolConfigError
from .spec import AdapterSpec, SUBSEQUENCE
from .textio import TextInstance
from .tokenizer import BpeTokenizer, default_tokenizer

__all__ = ["ExtractionReport", "extract_channels", "DEFAULT_MAX_TOKENS"]

DEFAULT_MAX_TOKENS = 128

logger = logging.getLogger("thinc_adapters")


@dataclass(frozen=True)
class ExtractionReport:
    total: int
    written: int
    skipped_ids: tuple[str, ...]
    channel_names: tuple[str, ...]
    max_tokens: int


def _check_channel_collisions(specs: Sequence[AdapterSpec]) -> tuple[str, ...]:
    names: list[str] = []
    for spec in specs:
        for channel in spec.channels:
            if channel in names:
                raise ToolConfigError(
                    f"channel {channel!r} produced by more than one tool"
                )
            names.append(channel)
    return tuple(names)


def _subsequence_channels(
    spec: AdapterSpec, scorer: Scorer, tokens: list[str]
) -> dict[str, list[float]]:
    prefixes = [tokens[: k + 1] for k in range(len(tokens))]
    rows: list[list[float]] = []
    for start in range(0, len(prefixes), spec.batch_size):
        batch = prefixes[start : start + spec.batch_size]
        rows.extend(scorer.class_probabilities_batch(batch, spec.classes))
    out: dict[str, list[float]] = {}
    for channel in spec.channels:
        column = spec.classes.index(channel)
        out[channel] = [row[column] for row in rows]
    return out


def _mean_pairwise_distance(vectors: list[tuple[float, ...]]) -> float:
    if len(vectors) < 2:
        return 0.0
    total = 0.0
    count = 0
    for a, b in combinations(vectors, 2):
        total += math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))
        count += 1
    return total / count


def _token_channel(
    spec: AdapterSpec, scorer: Scorer, tokens: list[str]
) -> list[float]:
    if spec.role == "lm-token-probability":
        return [
            scorer.next_token_probability(tokens[:k], tokens[k])
            for k in range(len(tokens))
        ]
    if spec.role == "ambiguity":
        return [
            _mean_pairwise_distance(scorer.related_word_embeddings(token))
            for token in tokens
        ]
    # morphosyntactic-ambiguity
    return [scorer.top_pos_confidence(token) for token in tokens]


def _normalize_ambiguity(records: list[dict], channel: str) -> None:
    """Min-max normalize the raw ambiguity values to [0, 1] across the
    whole corpus. A corpus with no spread normalizes to all zeros."""
    values = [v for record in records for v in record["channels"].get(channel, [])]
    if not values:
        return
    lo, hi = min(values), max(values)
    spread = hi - lo
    for record in records:
        series = record["channels"].get(channel)
        if series is None:
            continue
        if spread == 0.0:
            record["channels"][channel] = [0.0 for _ in series]
        else:
            record["channels"][channel] = [(v - lo) / spread for v in series]


def extract_channels(
    texts: Sequence[TextInstance],
    specs: Sequence[AdapterSpec],
    tokenizer: BpeTokenizer | None = None,
    max_tokens: int = DEFAULT_MAX_TOKENS,
) -> tuple[list[dict], ExtractionReport]:
    if not specs:
        raise ToolConfigError("at least one tool spec is required")
    if max_tokens < 1:
        raise ToolConfigError("max_tokens must be >= 1")
    channel_names = _check_channel_collisions(specs)
    tokenizer = tokenizer or default_tokenizer()
    scorers = [load_backend(spec.model) for spec in specs]

    records: list[dict] = []
    skipped: list[str] = []
    for instance in texts:
        tokens = tokenizer.tokenize(instance.text)[:max_tokens]
        if not tokens:
            logger.warning("skipping %s: text yields no tokens", instance.id)
            skipped.append(instance.id)
            continue
        channels: dict[str, list[float]] = {}
        for spec, scorer in zip(specs, scorers):
            if spec.mode == SUBSEQUENCE:
                channels.update(_subsequence_channels(spec, scorer, tokens))
            else:
                channels[spec.channels[0]] = _token_channel(spec, scorer, tokens)
        records.append(
            {"id": instance.id, "label": instance.label, "channels": channels}
        )

    ambiguity_channels = [s.channels[0] for s in specs if s.role == "ambiguity"]
    for channel in ambiguity_channels:
        _normalize_ambiguity(records, channel)

    report = ExtractionReport(
        total=len(texts),
        written=len(records),
        skipped_ids=tuple(skipped),
        channel_names=channel_names,
        max_tokens=max_tokens,
    )
    return records, report
