"""End-to-end acceptance suite.

Each test checks one numbered criterion at its stated tolerance and
records a single pass/fail line, echoed after the run.
"""

import math
import random
import time

import pytest

from conftest import brute_force_counts, random_docs, random_posts
from geoperc.artifacts import load_model, save_model
from geoperc.ensemble import (
    PrepConfig,
    build_ensemble,
    posterior,
    posts_in_cell,
    top_cells,
    zoom,
)
from geoperc.geogrid import BBox, CellId, cell_bbox, make_grid
from geoperc.ingest import Post
from geoperc.lmcore import (
    EstimatorConfig,
    QueryPhrase,
    continuation_prob,
    count_ngrams,
    counts_from_tables,
    estimate_discounts,
    mkn_bigram,
    mle_bigram,
    phrase_loglik,
)
from geoperc.synth import SynthSpec, generate

NO_PREP = PrepConfig(stopword_size=0, singleton_threshold=0)


def _passed(n, label):
    import conftest

    conftest.ACCEPTANCE_LINES.append(f"ACCEPTANCE {n:02d} {label}: PASS")


def vocab_of(counts):
    return set(counts.unigram) | {b for _, b in counts.bigram}


def test_01_mkn_normalization():
    start = time.monotonic()
    rng = random.Random(2024)
    cfg = EstimatorConfig(mode="mkn_normalizing")
    checked = 0
    for i in range(50):
        if i < 45:
            docs = random_docs(rng, n_docs=rng.randint(5, 60), vocab_size=rng.randint(5, 120))
        else:
            docs = random_docs(rng, n_docs=rng.randint(100, 160), vocab_size=rng.randint(200, 500))
        counts = count_ngrams(docs)
        if counts.continuation_total == 0:
            continue
        disc = estimate_discounts(counts)
        vocab = vocab_of(counts)
        for h in counts.history_totals:
            total = sum(mkn_bigram(counts, disc, h, w, cfg) for w in vocab)
            assert abs(total - 1.0) <= 1e-9, (h, total)
            checked += 1
    elapsed = time.monotonic() - start
    assert checked > 0
    assert elapsed < 10.0, f"took {elapsed:.1f}s"
    _passed(1, f"MKN normalizing-mode sums to 1 ({checked} histories, {elapsed:.1f}s)")


def test_02_continuation_and_mle_normalization():
    rng = random.Random(2025)
    for _ in range(25):
        counts = count_ngrams(random_docs(rng))
        if counts.continuation_total == 0:
            continue
        vocab = vocab_of(counts)
        assert abs(sum(continuation_prob(counts, w) for w in vocab) - 1.0) <= 1e-12
        for h in counts.history_totals:
            assert abs(sum(mle_bigram(counts, h, w) for w in vocab) - 1.0) <= 1e-12
    _passed(2, "continuation and MLE distributions sum to 1 within 1e-12")


def test_03_discount_formulas():
    d = estimate_discounts(
        counts_from_tables(
            {}, {("a", "b"): 1, ("b", "c"): 2, ("c", "a"): 3, ("a", "a"): 4}
        )
    )
    assert (d.n1, d.n2, d.n3, d.n4) == (1, 1, 1, 1)
    assert d.d1 == 1 - 2 / 3 and d.d2 == 1.0 and d.d3 == 3 - 4 / 3

    bigram, k = {}, 0
    for count, types in ((1, 4), (2, 2), (3, 2), (4, 1)):
        for _ in range(types):
            bigram[(f"x{k}", f"y{k}")] = count
            k += 1
    d2 = estimate_discounts(counts_from_tables({}, bigram))
    assert (d2.d1, d2.d2, d2.d3) == (0.5, 0.5, 2.0)

    # n3 = 0 zeroes the d3 denominator -> fallback
    d3 = estimate_discounts(counts_from_tables({}, {("a", "b"): 1, ("c", "d"): 2}))
    assert d3.d3 == 1.5
    d4 = estimate_discounts(counts_from_tables({}, {}))
    assert (d4.d1, d4.d2, d4.d3) == (0.5, 1.0, 1.5)
    _passed(3, "discount closed forms exact, fallbacks engage on zero denominators")


def test_04_hand_computed_mkn_values():
    counts = counts_from_tables(
        {"a": 5, "b": 2, "c": 3},
        {("a", "b"): 1, ("b", "c"): 2, ("c", "a"): 3, ("a", "a"): 4},
    )
    disc = estimate_discounts(counts)
    cfg = EstimatorConfig(mode="mkn_normalizing")
    assert abs(mkn_bigram(counts, disc, "a", "b", cfg) - 0.23333) <= 1e-5
    assert abs(mkn_bigram(counts, disc, "a", "a", cfg) - 0.66667) <= 1e-5
    assert abs(mkn_bigram(counts, disc, "a", "c", cfg) - 0.1) <= 1e-5
    _passed(4, "hand-computed MKN values on the fixed four-bigram corpus")


def test_05_count_oracle():
    rng = random.Random(2026)
    for _ in range(100):
        docs = random_docs(rng, n_docs=rng.randint(1, 1000), vocab_size=rng.randint(3, 60))
        assert count_ngrams(docs) == brute_force_counts(docs)
    _passed(5, "count tables equal brute-force recount on 100 random corpora")


def test_06_posterior_normalization_and_bayes():
    rng = random.Random(2027)
    g = make_grid(BBox(0, 0, 10, 10), 10, 10)
    for _ in range(5):
        ens, _ = build_ensemble(random_posts(rng, g, 250), g, prep=NO_PREP)
        heat = posterior(ens, "t1 t2")
        if not heat.degenerate:
            assert abs(sum(heat.scores.values()) - 1.0) <= 1e-9

    # two cells, equal priors, MLE likelihoods 0.2 and 0.1
    posts = []
    posts += [Post("a0", "love driving", 0.5, 0.5)]
    posts += [Post(f"a{i}", "love cooking", 0.5, 0.5) for i in range(1, 5)]
    posts += [Post(f"ap{i}", "#pad", 0.5, 0.5) for i in range(5)]
    posts += [Post("b0", "love driving", 9.5, 9.5)]
    posts += [Post(f"b{i}", "love cooking", 9.5, 9.5) for i in range(1, 10)]
    cfg = EstimatorConfig(mode="mle")
    ens, _ = build_ensemble(posts, g, cfg, NO_PREP)
    assert ens.prior(CellId(0, 0)) == ens.prior(CellId(9, 9)) == 0.5
    heat = posterior(ens, "love driving")
    assert abs(heat.score(CellId(0, 0)) - 2 / 3) <= 1e-12
    assert abs(heat.score(CellId(9, 9)) - 1 / 3) <= 1e-12
    _passed(6, "posterior sums to 1; the 0.2/0.1 likelihood pair gives 2/3 and 1/3")


def test_07_planted_signal_recovery():
    start = time.monotonic()
    grid = make_grid(BBox(41.0, -73.0, 42.0, -72.0), 6, 6)
    modes = ("mkn_normalizing", "mkn_paper_literal")
    hits = {m: 0 for m in modes}
    trials = 100
    for seed in range(trials):
        rng = random.Random(seed)
        planted = CellId(rng.randrange(6), rng.randrange(6))
        posts = generate(
            SynthSpec(grid=grid, planted=planted, posts_per_cell=80, seed=seed)
        )
        ens, _ = build_ensemble(
            posts, grid, EstimatorConfig(), PrepConfig(stopword_size=0)
        )
        for mode in modes:
            scored = ens.with_config(EstimatorConfig(mode=mode))
            heat = posterior(scored, "power outage")
            if top_cells(heat, 1) and top_cells(heat, 1)[0][0] == planted:
                hits[mode] += 1
    elapsed = time.monotonic() - start
    for mode in modes:
        assert hits[mode] >= 95, f"{mode}: {hits[mode]}/{trials}"
    assert elapsed < 60.0, f"took {elapsed:.1f}s"
    _passed(
        7,
        f"planted cell recovered {hits['mkn_normalizing']}/{trials} (normalizing) "
        f"and {hits['mkn_paper_literal']}/{trials} (literal) in {elapsed:.1f}s",
    )


def test_08_bigram_vs_unigram_context():
    g = make_grid(BBox(0, 0, 10, 10), 10, 10)
    a_texts = ["love driving"] * 8 + ["hate cooking"] * 8
    b_texts = ["hate driving"] * 8 + ["love cooking"] * 8
    posts = [Post(f"a{i}", t, 0.5, 0.5) for i, t in enumerate(a_texts)]
    posts += [Post(f"b{i}", t, 9.5, 9.5) for i, t in enumerate(b_texts)]
    cell_a, cell_b = CellId(0, 0), CellId(9, 9)

    for mode in ("mle", "interpolated", "mkn_normalizing", "mkn_paper_literal"):
        cfg = EstimatorConfig(mode=mode)
        ens, _ = build_ensemble(posts, g, cfg, NO_PREP)
        phrase = QueryPhrase(("love", "driving"))
        ll_a = phrase_loglik(
            ens.cells[cell_a].counts, ens.cells[cell_a].discounts, phrase, cfg
        )
        ll_b = phrase_loglik(
            ens.cells[cell_b].counts, ens.cells[cell_b].discounts, phrase, cfg
        )
        assert ll_a > ll_b
        heat = posterior(ens, "love driving")
        assert top_cells(heat, 1)[0][0] == cell_a

    # unigram-only oracle: product of per-cell relative frequencies
    ens, _ = build_ensemble(posts, g, EstimatorConfig(), NO_PREP)

    def unigram_score(cell):
        c = ens.cells[cell].counts
        return math.prod(c.unigram[w] / c.total_tokens for w in ("love", "driving"))

    assert abs(unigram_score(cell_a) - unigram_score(cell_b)) < 1e-12
    _passed(8, "bigram modes separate the cells, unigram-only scoring ties")


def test_09_zoom_equivalence(tmp_path):
    rng = random.Random(2028)
    g = make_grid(BBox(0, 0, 10, 10), 10, 10)
    from test_artifacts import dir_bytes

    done = 0
    for trial in range(20):
        posts = random_posts(rng, g, rng.randint(40, 200))
        ens, _ = build_ensemble(posts, g, prep=NO_PREP)
        cell = sorted(ens.post_counts)[rng.randrange(len(ens.post_counts))]
        subset = posts_in_cell(posts, g, cell)

        zoomed, _ = zoom(posts, ens, cell, 5, 5)
        rebuilt, _ = build_ensemble(
            subset, make_grid(cell_bbox(g, cell), 5, 5), ens.config, ens.prep
        )
        za, zb = tmp_path / f"z{trial}", tmp_path / f"r{trial}"
        save_model(zoomed, za, posts=subset)
        save_model(rebuilt, zb, posts=subset)
        assert dir_bytes(za) == dir_bytes(zb)
        done += 1
    assert done == 20
    _passed(9, "zoomed models byte-identical to direct rebuilds on 20 corpora")


def test_10_round_trip_and_determinism(tmp_path):
    rng = random.Random(2029)
    g = make_grid(BBox(0, 0, 10, 10), 10, 10)
    posts = random_posts(rng, g, 150)
    ens, _ = build_ensemble(posts, g, prep=NO_PREP)

    from test_artifacts import dir_bytes

    save_model(ens, tmp_path / "m1", posts=posts)
    assert load_model(tmp_path / "m1") == ens

    shuffled = list(posts)
    random.Random(1).shuffle(shuffled)
    ens2, _ = build_ensemble(shuffled, g, ens.config, ens.prep)
    save_model(ens2, tmp_path / "m2", posts=shuffled)
    assert dir_bytes(tmp_path / "m1") == dir_bytes(tmp_path / "m2")

    from geoperc.artifacts import heatmap_ascii, heatmap_geojson, heatmap_image

    heat = posterior(ens, "t1 t2")
    heat2 = posterior(load_model(tmp_path / "m1"), "t1 t2")
    assert heatmap_geojson(heat) == heatmap_geojson(heat2)
    assert heatmap_image(heat) == heatmap_image(heat2)
    assert heatmap_ascii(heat) == heatmap_ascii(heat2)
    _passed(10, "save/load lossless; models and renderings byte-deterministic")


def test_11_misc_fraction_instrumentation():
    g = make_grid(BBox(0, 0, 10, 10), 10, 10)
    posts = []
    for cell, (lat, lon) in ((0, (0.5, 0.5)), (1, (9.5, 9.5))):
        # 95 occurrences of repeated tokens plus 5 distinct singletons
        body = " ".join(f"k{cell}{i % 5}" for i in range(95))
        singles = " ".join(f"s{cell}{i}" for i in range(5))
        posts.append(Post(f"p{cell}", f"{body} {singles}", lat, lon))
    prep = PrepConfig(stopword_size=0, singleton_threshold=1)
    _, report = build_ensemble(posts, g, prep=prep)
    assert report.misc_percent == "5.00%"
    for frac in report.per_cell_misc.values():
        assert frac == pytest.approx(0.05)
    _passed(11, "build report states 5.00% misc-mapped on the 5%-singleton corpus")
