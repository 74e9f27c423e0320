"""Build the per-cell model ensemble, answer queries, and drill down.

Queries are answered with Bayes rule over the cells: per-cell phrase
log-likelihood plus log prior, normalized with log-sum-exp.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from . import textprep
from .errors import EmptyCorpusError, EmptyModelError, EmptyQueryError
from .geogrid import BBox, CellId, GridSpec, cell_bbox, locate, make_grid
from .ingest import Post
from .lmcore import (
    NEG_INF,
    CellCounts,
    DiscountSet,
    EstimatorConfig,
    QueryPhrase,
    count_ngrams,
    estimate_discounts,
    phrase_loglik,
)
from .textprep import StopwordSet, Vocabulary, apply_stopwords, normalize_text


@dataclass(frozen=True)
class PrepConfig:
    """Preprocessing knobs shared by build, query, and zoom."""

    stopword_size: int = 200
    singleton_threshold: int = 1


@dataclass
class CellModel:
    counts: CellCounts
    discounts: DiscountSet
    vocab: Vocabulary
    misc_fraction: float = 0.0


@dataclass
class BuildReport:
    input_posts: int = 0
    retained: int = 0
    dropped_outside: int = 0
    misc_fraction: float = 0.0
    per_cell_misc: dict[CellId, float] = field(default_factory=dict)

    @property
    def misc_percent(self) -> str:
        return f"{100.0 * self.misc_fraction:.2f}%"


@dataclass
class ModelEnsemble:
    grid: GridSpec
    cells: dict[CellId, CellModel]
    post_counts: dict[CellId, int]
    total_posts: int
    stopwords: StopwordSet
    config: EstimatorConfig
    prep: PrepConfig

    def prior(self, cell: CellId) -> float:
        return self.post_counts.get(cell, 0) / self.total_posts

    def with_config(self, config: EstimatorConfig) -> "ModelEnsemble":
        return replace(self, config=config)


@dataclass
class HeatMap:
    grid: GridSpec
    scores: dict[CellId, float]
    phrase: tuple[str, ...]
    degenerate: bool = False

    def score(self, cell: CellId) -> float:
        return self.scores.get(cell, 0.0)


def _worker_count() -> int:
    raw = os.environ.get("GEOPERC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_ensemble(
    posts: Sequence[Post],
    grid: GridSpec,
    cfg: EstimatorConfig = EstimatorConfig(),
    prep: PrepConfig = PrepConfig(),
) -> tuple[ModelEnsemble, BuildReport]:
    """Run the full pipeline: normalize, stopwords, per-cell vocab, counts, discounts.

    Posts outside the bbox are dropped and tallied in the report. Retained
    posts whose text normalizes to nothing still count toward the priors.
    """
    report = BuildReport(input_posts=len(posts))

    located: list[tuple[CellId, list[str]]] = []
    for post in posts:
        cell = locate(grid, post.lat, post.lon)
        if cell is None:
            report.dropped_outside += 1
            continue
        located.append((cell, normalize_text(post.text)))
    report.retained = len(located)
    if not located:
        raise EmptyCorpusError("no posts inside the bounding box")

    stops = textprep.build_stopwords(
        (tok for _, toks in located for tok in toks), prep.stopword_size
    )

    post_counts: dict[CellId, int] = {}
    cell_docs: dict[CellId, list[list[str]]] = {}
    for cell, toks in located:
        post_counts[cell] = post_counts.get(cell, 0) + 1
        cell_docs.setdefault(cell, []).append(apply_stopwords(toks, stops))

    vocabs, fractions = textprep.build_vocab(cell_docs, prep.singleton_threshold)

    def build_cell(cell: CellId) -> tuple[CellId, CellModel]:
        vocab = vocabs[cell]
        mapped = [vocab.map_tokens(doc) for doc in cell_docs[cell]]
        counts = count_ngrams(mapped)
        return cell, CellModel(
            counts=counts,
            discounts=estimate_discounts(counts),
            vocab=vocab,
            misc_fraction=fractions[cell],
        )

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = dict(pool.map(build_cell, cell_docs))
    else:
        cells = dict(build_cell(c) for c in cell_docs)

    total_occ = sum(m.counts.total_tokens for m in cells.values())
    mapped_occ = sum(
        m.counts.unigram.get(m.vocab.misc_symbol, 0) for m in cells.values()
    )
    report.misc_fraction = (mapped_occ / total_occ) if total_occ else 0.0
    report.per_cell_misc = dict(fractions)

    ens = ModelEnsemble(
        grid=grid,
        cells=cells,
        post_counts=post_counts,
        total_posts=len(located),
        stopwords=stops,
        config=cfg,
        prep=prep,
    )
    return ens, report


def preprocess_query(ens: ModelEnsemble, raw_phrase: str) -> list[str]:
    """Normalize + stopword-filter a query with the model's own pipeline."""
    tokens = apply_stopwords(normalize_text(raw_phrase), ens.stopwords)
    if not tokens:
        raise EmptyQueryError("query phrase is empty after preprocessing")
    return tokens


def posterior(ens: ModelEnsemble, raw_phrase: str) -> HeatMap:
    """Per-cell posterior P(cell | phrase) via log-sum-exp over log lik + log prior.

    Cells with no posts score 0. If no cell assigns the phrase a positive
    likelihood the all-zero map is returned with `degenerate` set.
    """
    tokens = preprocess_query(ens, raw_phrase)

    logpost: dict[CellId, float] = {}
    for cell, model in ens.cells.items():
        phrase = QueryPhrase(tuple(model.vocab.map_token(t) for t in tokens))
        try:
            ll = phrase_loglik(model.counts, model.discounts, phrase, ens.config)
        except EmptyModelError:
            ll = NEG_INF
        if ll == NEG_INF:
            continue
        logpost[cell] = ll + math.log(ens.prior(cell))

    if not logpost:
        return HeatMap(
            grid=ens.grid, scores={}, phrase=tuple(tokens), degenerate=True
        )

    peak = max(logpost.values())
    norm = peak + math.log(sum(math.exp(v - peak) for v in logpost.values()))
    scores = {cell: math.exp(v - norm) for cell, v in logpost.items()}
    return HeatMap(grid=ens.grid, scores=scores, phrase=tuple(tokens))


def top_cells(heat: HeatMap, k: int = 1) -> list[tuple[CellId, float]]:
    """Highest-scoring cells, descending; ties break by (row, col) ascending."""
    if k < 1:
        raise ValueError("k must be >= 1")
    positive = [(c, s) for c, s in heat.scores.items() if s > 0.0]
    positive.sort(key=lambda cs: (-cs[1], cs[0].row, cs[0].col))
    return positive[:k]


def posts_in_cell(posts: Sequence[Post], grid: GridSpec, cell: CellId) -> list[Post]:
    box = cell_bbox(grid, cell)
    return [p for p in posts if box.contains(p.lat, p.lon)]


def zoom(
    post_store: Sequence[Post],
    parent: ModelEnsemble,
    cell: CellId,
    rows: int = 10,
    cols: int = 10,
) -> tuple[ModelEnsemble, BuildReport]:
    """Rebuild a fresh ensemble on the posts inside one cell's bbox.

    Identical to running build_ensemble directly on the filtered subset:
    stopwords are re-derived on the sub-corpus, config and prep carry over.
    """
    subset = posts_in_cell(post_store, parent.grid, cell)
    if not subset:
        raise EmptyCorpusError(f"no posts in cell ({cell.row},{cell.col})")
    sub_grid = make_grid(cell_bbox(parent.grid, cell), rows, cols)
    return build_ensemble(subset, sub_grid, parent.config, parent.prep)
