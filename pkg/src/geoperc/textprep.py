"""Text normalization for posts and query phrases.

One pipeline serves both training posts and queries: lowercase, drop
URLs / hashtags / @-mentions, strip punctuation, remove stopwords, and
map rare tokens to the ``<misc>`` catch-all symbol.
"""

from __future__ import annotations

import sys
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

MISC = "<misc>"

_URL_PREFIXES = ("http://", "https://", "www.")

# Unicode punctuation (category P*) plus ASCII symbols (category S*); digits
# and letters are kept so tokens like "i95" survive with interior punctuation
# deleted rather than split on.
_STRIP = {
    ch
    for ch in map(chr, range(sys.maxunicode + 1))
    if unicodedata.category(ch).startswith("P")
}
_STRIP.update(ch for ch in map(chr, range(128)) if unicodedata.category(ch).startswith("S"))
_STRIP_TABLE = {ord(ch): None for ch in _STRIP}


def normalize_text(raw: str) -> list[str]:
    """Turn raw post text into clean lowercase tokens.

    Tokens are split on whitespace; URL-looking tokens and tokens starting
    with '#' or '@' are dropped whole; punctuation is then deleted in place.
    Empty input yields an empty list.
    """
    tokens = []
    for tok in raw.lower().split():
        if tok.startswith(_URL_PREFIXES):
            continue
        if tok.startswith(("#", "@")):
            continue
        tok = tok.translate(_STRIP_TABLE)
        if tok:
            tokens.append(tok)
    return tokens


@dataclass(frozen=True)
class StopwordSet:
    """The `size` most frequent tokens of a training corpus."""

    words: frozenset[str]
    size: int

    def __contains__(self, token: str) -> bool:
        return token in self.words


def build_stopwords(token_stream: Iterable[str], size: int = 200) -> StopwordSet:
    """Pick the `size` highest-frequency tokens; ties break lexicographically."""
    if size < 0:
        raise ValueError("stopword size must be >= 0")
    freq = Counter(token_stream)
    ranked = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))
    return StopwordSet(words=frozenset(tok for tok, _ in ranked[:size]), size=size)


def apply_stopwords(tokens: Sequence[str], stops: StopwordSet) -> list[str]:
    return [t for t in tokens if t not in stops]


@dataclass(frozen=True)
class Vocabulary:
    """Per-cell kept set; everything else maps to the ``<misc>`` symbol."""

    kept: frozenset[str]
    singleton_threshold: int = 1
    misc_symbol: str = MISC

    def map_token(self, token: str) -> str:
        return token if token in self.kept else self.misc_symbol

    def map_tokens(self, tokens: Sequence[str]) -> list[str]:
        return [self.map_token(t) for t in tokens]


def build_vocab(
    cell_streams: dict, singleton_threshold: int = 1
) -> tuple[dict, dict[object, float]]:
    """Build one Vocabulary per cell and report the mapped-occurrence fraction.

    A token is kept iff its in-cell frequency exceeds the threshold;
    threshold 0 disables misc mapping entirely.
    """
    if singleton_threshold < 0:
        raise ValueError("singleton threshold must be >= 0")
    vocabs = {}
    fractions: dict[object, float] = {}
    for cell, docs in cell_streams.items():
        freq: Counter = Counter()
        for doc in docs:
            freq.update(doc)
        kept = frozenset(t for t, c in freq.items() if c > singleton_threshold)
        total = sum(freq.values())
        mapped = sum(c for t, c in freq.items() if t not in kept)
        vocabs[cell] = Vocabulary(kept=kept, singleton_threshold=singleton_threshold)
        fractions[cell] = (mapped / total) if total else 0.0
    return vocabs, fractions
