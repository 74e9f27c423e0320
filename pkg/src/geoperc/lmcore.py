"""Per-cell count tables and the bigram probability estimators.

Three estimator families over one CellCounts table:

* plain maximum-likelihood bigrams,
* linear interpolation of bigram and unigram relative frequencies,
* Modified Kneser-Ney discounting with a continuation-count unigram
  backoff, in two flavors (a literal single-discount backoff mass, and a
  per-count-class backoff mass that is exactly normalizing).

Phrase scoring is done entirely in the natural-log domain.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import EmptyModelError

NEG_INF = float("-inf")

MODE_MLE = "mle"
MODE_INTERPOLATED = "interpolated"
MODE_MKN_PAPER_LITERAL = "mkn_paper_literal"
MODE_MKN_NORMALIZING = "mkn_normalizing"
MODES = (MODE_MLE, MODE_INTERPOLATED, MODE_MKN_PAPER_LITERAL, MODE_MKN_NORMALIZING)


@dataclass(frozen=True)
class EstimatorConfig:
    mode: str = MODE_MKN_NORMALIZING
    lambda1: float = 0.5
    # "total_tokens" normalizes; "distinct_tokens" is the literal unigram
    # denominator, kept for fidelity even though it does not normalize.
    unigram_denominator: str = "total_tokens"
    # Scoring rule for single-token phrases (the j=2..k product is empty).
    single_token_rule: str = "continuation"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown estimator mode {self.mode!r}")
        if not (0.0 <= self.lambda1 <= 1.0):
            raise ValueError("lambda1 must be in [0, 1]")
        if self.unigram_denominator not in ("total_tokens", "distinct_tokens"):
            raise ValueError(f"unknown unigram denominator {self.unigram_denominator!r}")
        if self.single_token_rule not in ("continuation", "relative_frequency"):
            raise ValueError(f"unknown single-token rule {self.single_token_rule!r}")


@dataclass
class CellCounts:
    """Unigram/bigram counts for one cell plus the derived MKN statistics."""

    unigram: dict[str, int] = field(default_factory=dict)
    bigram: dict[tuple[str, str], int] = field(default_factory=dict)
    total_tokens: int = 0
    distinct_tokens: int = 0
    # c(h) summed over bigrams with history h
    history_totals: dict[str, int] = field(default_factory=dict)
    # |{w : c(w, v) > 0}| per v, and its total (= number of bigram types)
    continuation_left: dict[str, int] = field(default_factory=dict)
    continuation_total: int = 0
    # per history: continuations seen exactly once, twice, three-or-more times
    per_history_type_counts: dict[str, tuple[int, int, int]] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return self.total_tokens == 0


def count_ngrams(docs: Iterable[Sequence[str]]) -> CellCounts:
    """Accumulate unigram and bigram counts; bigrams never cross documents."""
    unigram: Counter = Counter()
    bigram: Counter = Counter()
    for doc in docs:
        unigram.update(doc)
        for i in range(len(doc) - 1):
            bigram[(doc[i], doc[i + 1])] += 1
    return counts_from_tables(dict(unigram), dict(bigram))


def counts_from_tables(
    unigram: dict[str, int], bigram: dict[tuple[str, str], int]
) -> CellCounts:
    """Rebuild the derived MKN statistics from raw unigram/bigram tables."""
    history_totals: Counter = Counter()
    continuation_left: Counter = Counter()
    per_history: dict[str, list[int]] = {}
    for (prev, cur), c in bigram.items():
        history_totals[prev] += c
        continuation_left[cur] += 1
        slot = per_history.setdefault(prev, [0, 0, 0])
        slot[min(c, 3) - 1] += 1

    return CellCounts(
        unigram=unigram,
        bigram=bigram,
        total_tokens=sum(unigram.values()),
        distinct_tokens=len(unigram),
        history_totals=dict(history_totals),
        continuation_left=dict(continuation_left),
        continuation_total=len(bigram),
        per_history_type_counts={h: tuple(v) for h, v in per_history.items()},
    )


def mle_bigram(counts: CellCounts, w_prev: str, w: str) -> float:
    """c(w_prev, w) / c(w_prev); 0 for an unseen history by convention."""
    denom = counts.history_totals.get(w_prev, 0)
    if denom == 0:
        return 0.0
    return counts.bigram.get((w_prev, w), 0) / denom


def interpolated_bigram(
    counts: CellCounts, w_prev: str, w: str, cfg: EstimatorConfig
) -> float:
    """lambda1 * MLE bigram + (1 - lambda1) * unigram relative frequency."""
    if counts.empty:
        raise EmptyModelError("interpolation over an empty cell")
    if cfg.unigram_denominator == "distinct_tokens":
        uni = counts.unigram.get(w, 0) / counts.distinct_tokens
    else:
        uni = counts.unigram.get(w, 0) / counts.total_tokens
    return cfg.lambda1 * mle_bigram(counts, w_prev, w) + (1.0 - cfg.lambda1) * uni


def continuation_prob(counts: CellCounts, w: str) -> float:
    """Fraction of distinct bigram types that end in w."""
    if counts.continuation_total == 0:
        raise EmptyModelError("no bigram types; continuation distribution undefined")
    return counts.continuation_left.get(w, 0) / counts.continuation_total


@dataclass(frozen=True)
class DiscountSet:
    d1: float
    d2: float
    d3: float
    n1: int
    n2: int
    n3: int
    n4: int

    def for_count(self, c: int) -> float:
        if c <= 1:
            return self.d1
        if c == 2:
            return self.d2
        return self.d3


# Fallbacks used per discount when its closed-form denominator is zero.
_FALLBACK = (0.5, 1.0, 1.5)


def estimate_discounts(counts: CellCounts) -> DiscountSet:
    """Closed-form count-class discounts from the bigram frequency-of-frequency table."""
    freq_of_freq = Counter(counts.bigram.values())
    n1, n2, n3, n4 = (freq_of_freq.get(i, 0) for i in (1, 2, 3, 4))
    y_denom = n1 + 2 * n2

    def discount(k: int, num: float, denom: float) -> float:
        if denom == 0:
            return _FALLBACK[k - 1]
        return min(max(k - num / denom, 0.0), float(k))

    d1 = discount(1, 2.0 * n2 * n1, n1 * y_denom)
    d2 = discount(2, 3.0 * n3 * n1, n2 * y_denom)
    d3 = discount(3, 4.0 * n4 * n1, n3 * y_denom)
    return DiscountSet(d1=d1, d2=d2, d3=d3, n1=n1, n2=n2, n3=n3, n4=n4)


def mkn_bigram(
    counts: CellCounts,
    disc: DiscountSet,
    w_prev: str,
    w: str,
    cfg: EstimatorConfig,
) -> float:
    """Discounted bigram estimate with continuation-probability backoff.

    In the normalizing mode the backoff mass spends exactly what the
    discounts removed, so the conditional distribution sums to one; the
    literal mode reserves a single discount's worth of mass per known
    continuation, selected by the queried bigram's own count.
    """
    if counts.empty:
        raise EmptyModelError("MKN estimate over an empty cell")
    h_total = counts.history_totals.get(w_prev, 0)
    if h_total == 0:
        # History never observed in this cell: pure continuation backoff.
        return continuation_prob(counts, w)

    c = counts.bigram.get((w_prev, w), 0)
    d_hat = disc.for_count(c) if c > 0 else disc.d1
    first = max(c - d_hat, 0.0) / h_total if c > 0 else 0.0

    if cfg.mode == MODE_MKN_NORMALIZING:
        t1, t2, t3p = counts.per_history_type_counts.get(w_prev, (0, 0, 0))
        mass = (disc.d1 * t1 + disc.d2 * t2 + disc.d3 * t3p) / h_total
    else:
        n_types = sum(counts.per_history_type_counts.get(w_prev, (0, 0, 0)))
        mass = d_hat * n_types / h_total
    return first + mass * continuation_prob(counts, w)


@dataclass(frozen=True)
class QueryPhrase:
    """A normalized, stopword-filtered, vocab-mapped token sequence."""

    tokens: tuple[str, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("query phrase must contain at least one token")

    @property
    def k(self) -> int:
        return len(self.tokens)


def _log(p: float) -> float:
    return math.log(p) if p > 0.0 else NEG_INF


def phrase_loglik(
    counts: CellCounts,
    disc: DiscountSet,
    phrase: QueryPhrase,
    cfg: EstimatorConfig,
) -> float:
    """log P(phrase | cell): sum of log bigram factors for j = 2..k.

    Single-token phrases fall back to the configured rule (continuation
    probability by default). A zero factor yields -inf, not an error.
    """
    if phrase.k == 1:
        w = phrase.tokens[0]
        if cfg.single_token_rule == "relative_frequency":
            if counts.empty:
                raise EmptyModelError("relative frequency over an empty cell")
            return _log(counts.unigram.get(w, 0) / counts.total_tokens)
        return _log(continuation_prob(counts, w))

    total = 0.0
    for prev, cur in zip(phrase.tokens, phrase.tokens[1:]):
        if cfg.mode == MODE_MLE:
            p = mle_bigram(counts, prev, cur)
        elif cfg.mode == MODE_INTERPOLATED:
            p = interpolated_bigram(counts, prev, cur, cfg)
        else:
            p = mkn_bigram(counts, disc, prev, cur, cfg)
        lp = _log(p)
        if lp == NEG_INF:
            return NEG_INF
        total += lp
    return total
