"""Synthetic planted-signal corpora for demos and tests.

Every cell gets posts drawn from a shared background vocabulary; one
planted cell carries the target bigram at a configurable multiple of the
background rate. Recovering that cell from the posterior heat map is the
end-to-end sanity check for the whole pipeline.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .geogrid import CellId, GridSpec, cell_bbox
from .ingest import Post

# Two-token perception phrase that the planted cell over-represents.
DEFAULT_PHRASE = ("power", "outage")

_BACKGROUND = [
    "coffee", "morning", "rain", "sunny", "game", "tonight", "dinner",
    "pizza", "train", "late", "work", "meeting", "park", "running",
    "music", "show", "weekend", "beach", "snow", "cold", "warm", "home",
    "friends", "birthday", "movie", "night", "lunch", "store", "road",
    "river", "bridge", "school", "class", "team", "win", "lost", "news",
]


def _background_vocab(phrase: tuple[str, str]) -> list[str]:
    # The phrase words also occur as ordinary background unigrams, so a
    # stray cell cannot look planted just by containing them once.
    return _BACKGROUND + list(phrase)


@dataclass(frozen=True)
class SynthSpec:
    grid: GridSpec
    planted: CellId
    posts_per_cell: int = 30
    tokens_per_post: int = 8
    background_rate: float = 0.05
    signal_multiplier: float = 10.0
    phrase: tuple[str, str] = DEFAULT_PHRASE
    seed: int = 0


def generate(spec: SynthSpec) -> list[Post]:
    """Emit posts for every grid cell; deterministic for a given seed."""
    rng = random.Random(spec.seed)
    vocab = _background_vocab(spec.phrase)
    posts: list[Post] = []
    pid = 0
    for cell in spec.grid.all_cells():
        box = cell_bbox(spec.grid, cell)
        rate = spec.background_rate
        if cell == spec.planted:
            rate *= spec.signal_multiplier
        for _ in range(spec.posts_per_cell):
            tokens = rng.choices(vocab, k=spec.tokens_per_post)
            if rng.random() < rate:
                pos = rng.randrange(len(tokens) - 1)
                tokens[pos : pos + 2] = list(spec.phrase)
            # interior sample so posts never sit on a shared cell edge
            lat = box.min_lat + (0.05 + 0.9 * rng.random()) * (box.max_lat - box.min_lat)
            lon = box.min_lon + (0.05 + 0.9 * rng.random()) * (box.max_lon - box.min_lon)
            posts.append(
                Post(id=str(pid), text=" ".join(tokens), lat=lat, lon=lon, lang="en")
            )
            pid += 1
    return posts
