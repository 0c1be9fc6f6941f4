"""Self-contained byte-pair-encoding tokenizer.

Pre-tokens are maximal runs of word characters or single punctuation
marks. Each pre-token is split into characters (the last one carrying an
end-of-word marker) and adjacent symbol pairs are merged greedily in the
order given by a learned merge table. The default merge table is learned
once, at import, from a small embedded text sample, so tokenization is
fully deterministic and needs no external files or downloads.
"""

from __future__ import annotations

import re
from collections import Counter
from functools import lru_cache

__all__ = ["BpeTokenizer", "learn_merges", "default_tokenizer", "END_OF_WORD"]

END_OF_WORD = "</w>"

_PRETOKEN = re.compile(r"\w+|[^\w\s]", re.UNICODE)

# Plain prose sample the default merge table is learned from. Any text
# works; this one keeps common English letter pairs frequent.
_SAMPLE_TEXT = """
the quick brown fox jumps over the lazy dog while the old gray cat
watches from the garden wall and thinks about dinner with great
patience because the evening light makes everything look warmer than
it really is and the children walking home from school laugh at a
joke about a chicken that crosses the road to prove a point nobody
remembers anymore which is of course the whole point of telling it
again and again until the words themselves start to sound funny and
the laughter comes from the sound rather than the sense of the story
people tell each other when the day is done and there is nothing left
to do but talk and listen and wait for tomorrow to arrive on time
"""


def pretokenize(text: str) -> list[str]:
    return _PRETOKEN.findall(text)


def _word_symbols(word: str) -> tuple[str, ...]:
    chars = list(word)
    chars[-1] = chars[-1] + END_OF_WORD
    return tuple(chars)


def _pair_counts(vocab: dict[tuple[str, ...], int]) -> Counter:
    counts: Counter = Counter()
    for symbols, freq in vocab.items():
        for a, b in zip(symbols, symbols[1:]):
            counts[(a, b)] += freq
    return counts


def _merge_vocab(
    vocab: dict[tuple[str, ...], int], pair: tuple[str, str]
) -> dict[tuple[str, ...], int]:
    a, b = pair
    merged = a + b
    out: dict[tuple[str, ...], int] = {}
    for symbols, freq in vocab.items():
        rebuilt: list[str] = []
        i = 0
        while i < len(symbols):
            if i + 1 < len(symbols) and symbols[i] == a and symbols[i + 1] == b:
                rebuilt.append(merged)
                i += 2
            else:
                rebuilt.append(symbols[i])
                i += 1
        out[tuple(rebuilt)] = out.get(tuple(rebuilt), 0) + freq
    return out


def learn_merges(texts: list[str], n_merges: int) -> list[tuple[str, str]]:
    """Learn a merge table: repeatedly merge the most frequent adjacent
    symbol pair. Ties break lexicographically so the result is
    deterministic regardless of input order."""
    vocab: dict[tuple[str, ...], int] = {}
    for text in texts:
        for word in pretokenize(text):
            symbols = _word_symbols(word)
            vocab[symbols] = vocab.get(symbols, 0) + 1
    merges: list[tuple[str, str]] = []
    for _ in range(n_merges):
        counts = _pair_counts(vocab)
        if not counts:
            break
        best = max(counts.items(), key=lambda kv: (kv[1], kv[0]))
        if best[1] < 2:
            break
        merges.append(best[0])
        vocab = _merge_vocab(vocab, best[0])
    return merges


class BpeTokenizer:
    def __init__(self, merges: list[tuple[str, str]]):
        self._ranks = {pair: rank for rank, pair in enumerate(merges)}
        self._encode_word = lru_cache(maxsize=4096)(self._encode_word_uncached)

    def _encode_word_uncached(self, word: str) -> tuple[str, ...]:
        symbols = list(_word_symbols(word))
        while len(symbols) > 1:
            pairs = list(zip(symbols, symbols[1:]))
            ranked = [(self._ranks[p], p) for p in pairs if p in self._ranks]
            if not ranked:
                break
            _, (a, b) = min(ranked)
            rebuilt: list[str] = []
            i = 0
            while i < len(symbols):
                if i + 1 < len(symbols) and symbols[i] == a and symbols[i + 1] == b:
                    rebuilt.append(a + b)
                    i += 2
                else:
                    rebuilt.append(symbols[i])
                    i += 1
            symbols = rebuilt
        return tuple(symbols)

    def tokenize(self, text: str) -> list[str]:
        tokens: list[str] = []
        for word in pretokenize(text):
            tokens.extend(self._encode_word(word))
        return tokens


_DEFAULT: BpeTokenizer | None = None


def default_tokenizer() -> BpeTokenizer:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = BpeTokenizer(learn_merges([_SAMPLE_TEXT], n_merges=200))
    return _DEFAULT
