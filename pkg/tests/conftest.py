"""Shared fixtures: random corpora and independent count oracles."""

from __future__ import annotations

import random

import pytest

from geoperc.ingest import Post
from geoperc.lmcore import CellCounts


def random_docs(rng: random.Random, n_docs=None, vocab_size=None) -> list[list[str]]:
    """A random token corpus (list of documents) for count/probability tests."""
    if vocab_size is None:
        vocab_size = rng.randint(3, 40)
    if n_docs is None:
        n_docs = rng.randint(1, 40)
    vocab = [f"w{i}" for i in range(vocab_size)]
    return [
        [rng.choice(vocab) for _ in range(rng.randint(0, 12))] for _ in range(n_docs)
    ]


def brute_force_counts(docs) -> CellCounts:
    """Count oracle built with deliberately different machinery than count_ngrams."""
    unigram: dict[str, int] = {}
    bigram: dict[tuple[str, str], int] = {}
    for doc in docs:
        for tok in doc:
            unigram[tok] = unigram.get(tok, 0) + 1
        for i in range(len(doc)):
            window = doc[i : i + 2]
            if len(window) == 2:
                key = (window[0], window[1])
                bigram[key] = bigram.get(key, 0) + 1

    histories = {a for a, _ in bigram}
    ends = {b for _, b in bigram}
    history_totals = {
        h: sum(c for (a, _), c in bigram.items() if a == h) for h in histories
    }
    continuation_left = {
        w: len({a for (a, b) in bigram if b == w}) for w in ends
    }
    per_history = {}
    for h in histories:
        counts = [c for (a, _), c in bigram.items() if a == h]
        per_history[h] = (
            sum(1 for c in counts if c == 1),
            sum(1 for c in counts if c == 2),
            sum(1 for c in counts if c >= 3),
        )
    return CellCounts(
        unigram=unigram,
        bigram=bigram,
        total_tokens=sum(unigram.values()),
        distinct_tokens=len(unigram),
        history_totals=history_totals,
        continuation_left=continuation_left,
        continuation_total=len(bigram),
        per_history_type_counts=per_history,
    )


def random_posts(rng: random.Random, grid, n: int) -> list[Post]:
    """Posts with random short texts at random in-bbox coordinates."""
    b = grid.bbox
    words = [f"t{i}" for i in range(rng.randint(5, 30))]
    posts = []
    for i in range(n):
        text = " ".join(rng.choice(words) for _ in range(rng.randint(1, 8)))
        lat = b.min_lat + rng.random() * (b.max_lat - b.min_lat)
        lon = b.min_lon + rng.random() * (b.max_lon - b.min_lon)
        posts.append(Post(id=str(i), text=text, lat=lat, lon=lon, lang="en"))
    return posts


@pytest.fixture(autouse=True)
def fixed_source_date_epoch(monkeypatch):
    # Keep saved model bytes reproducible across test runs.
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")


# One line per acceptance criterion, recorded by the acceptance tests and
# echoed after the run (the summary hook is not subject to output capture).
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
    for rep in terminalreporter.stats.get("failed", []):
        name = rep.nodeid.rsplit("::", 1)[-1]
        if "test_acceptance" in rep.nodeid and name.startswith("test_"):
            parts = name.split("_", 2)
            if len(parts) == 3 and parts[1].isdigit():
                terminalreporter.write_line(
                    f"ACCEPTANCE {parts[1]} {parts[2]}: FAIL"
                )
