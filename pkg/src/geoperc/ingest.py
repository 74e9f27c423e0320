"""Parse line-delimited JSON post files into validated Post records."""

from __future__ import annotations

import gzip
import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Union

DEFAULT_LANG_FILTER = frozenset({"en", "und"})


@dataclass(frozen=True)
class Post:
    id: str
    text: str
    lat: float
    lon: float
    lang: Optional[str] = None
    timestamp: Optional[str] = None


@dataclass
class IngestReport:
    total_lines: int = 0
    accepted: int = 0
    rejected: dict[str, int] = field(default_factory=dict)

    def reject(self, reason: str):
        self.rejected[reason] = self.rejected.get(reason, 0) + 1


def _coerce_record(obj: dict) -> Optional[Post]:
    lat, lon = obj.get("lat"), obj.get("lon")
    if lat is None or lon is None:
        return None
    return Post(
        id=str(obj.get("id", "")),
        text=obj["text"],
        lat=float(lat),
        lon=float(lon),
        lang=obj.get("lang"),
        timestamp=obj.get("timestamp"),
    )


def parse_posts(
    lines: Iterable[str],
    lang_filter: frozenset = DEFAULT_LANG_FILTER,
    dedupe: bool = False,
) -> tuple[list[Post], IngestReport]:
    """Validate each JSON line; rejects are tallied by reason, never fatal.

    Records without a lang field pass when the filter includes "und".
    """
    report = IngestReport()
    accepted: list[Post] = []
    seen_ids: set[str] = set()
    for line in lines:
        if not line.strip():
            continue
        report.total_lines += 1
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            report.reject("bad-json")
            continue
        if not isinstance(obj, dict) or "text" not in obj or not isinstance(obj["text"], str):
            report.reject("no-text")
            continue
        if obj.get("lat") is None or obj.get("lon") is None:
            report.reject("no-geo")
            continue
        try:
            post = _coerce_record(obj)
        except (TypeError, ValueError):
            report.reject("bad-coords")
            continue
        if not (-90.0 <= post.lat <= 90.0 and -180.0 <= post.lon <= 180.0):
            report.reject("bad-coords")
            continue
        if not post.text.strip():
            report.reject("empty-text")
            continue
        lang = post.lang if post.lang is not None else "und"
        if lang not in lang_filter:
            report.reject("lang")
            continue
        if dedupe:
            if post.id in seen_ids:
                report.reject("duplicate-id")
                continue
            seen_ids.add(post.id)
        accepted.append(post)
    report.accepted = len(accepted)
    return accepted, report


def open_posts_file(path: str) -> IO[str]:
    """Open a JSONL posts file; gzip is used when the name ends in .gz."""
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def read_posts_file(
    path: str,
    lang_filter: frozenset = DEFAULT_LANG_FILTER,
    dedupe: bool = False,
) -> tuple[list[Post], IngestReport]:
    with open_posts_file(path) as fh:
        return parse_posts(fh, lang_filter=lang_filter, dedupe=dedupe)
