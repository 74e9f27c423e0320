"""Durable model storage and heat-map rendering.

A saved model is a human-inspectable directory:

    manifest.json
    stopwords.txt
    posts.jsonl
    cells/<row>_<col>/unigrams.tsv
    cells/<row>_<col>/bigrams.tsv
    cells/<row>_<col>/vocab.txt
    cells/<row>_<col>/meta.json

All tables are sorted so a given ensemble always serializes to identical
bytes. The `created` timestamp honors SOURCE_DATE_EPOCH (reproducible
builds); without it a fixed epoch is written so rebuilds stay
byte-identical.
"""

from __future__ import annotations

import datetime
import json
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Union

from .ensemble import CellModel, HeatMap, ModelEnsemble, PrepConfig
from .errors import (
    CorruptTableError,
    MissingFileError,
    MissingManifestError,
    VersionMismatchError,
)
from .geogrid import BBox, CellId, GridSpec, cell_bbox
from .ingest import Post
from .lmcore import DiscountSet, EstimatorConfig, counts_from_tables
from .textprep import StopwordSet, Vocabulary

FORMAT_VERSION = 1

PathLike = Union[str, Path]


@dataclass(frozen=True)
class ModelManifest:
    version: int
    bbox: tuple[float, float, float, float]
    rows: int
    cols: int
    config: dict
    prep: dict
    post_count: int
    created: str
    cells: tuple[str, ...]


def _created_stamp() -> str:
    epoch = int(os.environ.get("SOURCE_DATE_EPOCH", "0"))
    return (
        datetime.datetime.fromtimestamp(epoch, tz=datetime.timezone.utc)
        .strftime("%Y-%m-%dT%H:%M:%SZ")
    )


def _write_json(path: Path, obj) -> None:
    path.write_text(
        json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def _post_line(p: Post) -> str:
    rec = {"id": p.id, "text": p.text, "lat": p.lat, "lon": p.lon}
    if p.lang is not None:
        rec["lang"] = p.lang
    if p.timestamp is not None:
        rec["timestamp"] = p.timestamp
    return json.dumps(rec, sort_keys=True, ensure_ascii=False)


def save_model(
    ens: ModelEnsemble, path: PathLike, posts: Optional[list[Post]] = None
) -> ModelManifest:
    """Write the ensemble (and, when given, the retained posts) to `path`."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)

    cell_names = sorted(f"{c.row}_{c.col}" for c in ens.cells)
    manifest = ModelManifest(
        version=FORMAT_VERSION,
        bbox=(
            ens.grid.bbox.min_lat,
            ens.grid.bbox.min_lon,
            ens.grid.bbox.max_lat,
            ens.grid.bbox.max_lon,
        ),
        rows=ens.grid.rows,
        cols=ens.grid.cols,
        config=asdict(ens.config),
        prep=asdict(ens.prep),
        post_count=ens.total_posts,
        created=_created_stamp(),
        cells=tuple(cell_names),
    )
    _write_json(root / "manifest.json", asdict(manifest))

    stop_lines = ["version=1"] + sorted(ens.stopwords.words)
    (root / "stopwords.txt").write_text("\n".join(stop_lines) + "\n", encoding="utf-8")

    if posts is not None:
        lines = sorted(_post_line(p) for p in posts)
        (root / "posts.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")

    for cell, model in sorted(ens.cells.items(), key=lambda cm: (cm[0].row, cm[0].col)):
        cdir = root / "cells" / f"{cell.row}_{cell.col}"
        cdir.mkdir(parents=True, exist_ok=True)

        uni = "".join(
            f"{tok}\t{cnt}\n" for tok, cnt in sorted(model.counts.unigram.items())
        )
        (cdir / "unigrams.tsv").write_text(uni, encoding="utf-8")
        bi = "".join(
            f"{a}\t{b}\t{cnt}\n"
            for (a, b), cnt in sorted(model.counts.bigram.items())
        )
        (cdir / "bigrams.tsv").write_text(bi, encoding="utf-8")

        vocab_lines = ["version=1"] + sorted(model.vocab.kept)
        (cdir / "vocab.txt").write_text("\n".join(vocab_lines) + "\n", encoding="utf-8")

        _write_json(
            cdir / "meta.json",
            {
                "post_count": ens.post_counts[cell],
                "misc_fraction": model.misc_fraction,
                "discounts": asdict(model.discounts),
            },
        )
    return manifest


def _read_token_list(path: Path) -> list[str]:
    if not path.is_file():
        raise MissingFileError(f"missing {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "version=1":
        raise VersionMismatchError(f"unrecognized header in {path}")
    return lines[1:]


def _read_counts(cdir: Path):
    uni_path, bi_path = cdir / "unigrams.tsv", cdir / "bigrams.tsv"
    for p in (uni_path, bi_path):
        if not p.is_file():
            raise MissingFileError(f"missing {p}")
    unigram: dict[str, int] = {}
    for line in uni_path.read_text(encoding="utf-8").splitlines():
        parts = line.split("\t")
        if len(parts) != 2:
            raise CorruptTableError(f"bad unigram row in {uni_path}: {line!r}")
        tok, cnt = parts
        try:
            unigram[tok] = int(cnt)
        except ValueError:
            raise CorruptTableError(f"non-integer count in {uni_path}: {line!r}")
        if unigram[tok] < 0:
            raise CorruptTableError(f"negative count in {uni_path}: {line!r}")
    bigram: dict[tuple[str, str], int] = {}
    for line in bi_path.read_text(encoding="utf-8").splitlines():
        parts = line.split("\t")
        if len(parts) != 3:
            raise CorruptTableError(f"bad bigram row in {bi_path}: {line!r}")
        a, b, cnt = parts
        try:
            bigram[(a, b)] = int(cnt)
        except ValueError:
            raise CorruptTableError(f"non-integer count in {bi_path}: {line!r}")
        if bigram[(a, b)] < 0:
            raise CorruptTableError(f"negative count in {bi_path}: {line!r}")
    return counts_from_tables(unigram, bigram)


def load_model(path: PathLike) -> ModelEnsemble:
    root = Path(path)
    mpath = root / "manifest.json"
    if not mpath.is_file():
        raise MissingManifestError(f"no manifest.json under {root}")
    try:
        raw = json.loads(mpath.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorruptTableError(f"unparsable manifest: {exc}")
    if raw.get("version") != FORMAT_VERSION:
        raise VersionMismatchError(f"unsupported model version {raw.get('version')!r}")

    bbox = BBox(*raw["bbox"])
    grid = GridSpec(bbox=bbox, rows=raw["rows"], cols=raw["cols"])
    config = EstimatorConfig(**raw["config"])
    prep = PrepConfig(**raw["prep"])

    stops = StopwordSet(
        words=frozenset(_read_token_list(root / "stopwords.txt")),
        size=prep.stopword_size,
    )

    cells: dict[CellId, CellModel] = {}
    post_counts: dict[CellId, int] = {}
    for name in raw["cells"]:
        try:
            r, c = (int(x) for x in name.split("_"))
        except ValueError:
            raise CorruptTableError(f"bad cell name {name!r} in manifest")
        cdir = root / "cells" / name
        if not cdir.is_dir():
            raise MissingFileError(f"manifest references missing cell dir {cdir}")
        counts = _read_counts(cdir)
        meta = json.loads((cdir / "meta.json").read_text(encoding="utf-8"))
        cell = CellId(r, c)
        cells[cell] = CellModel(
            counts=counts,
            discounts=DiscountSet(**meta["discounts"]),
            vocab=Vocabulary(
                kept=frozenset(_read_token_list(cdir / "vocab.txt")),
                singleton_threshold=prep.singleton_threshold,
            ),
            misc_fraction=meta["misc_fraction"],
        )
        post_counts[cell] = meta["post_count"]

    return ModelEnsemble(
        grid=grid,
        cells=cells,
        post_counts=post_counts,
        total_posts=raw["post_count"],
        stopwords=stops,
        config=config,
        prep=prep,
    )


def load_posts(path: PathLike) -> list[Post]:
    """Read back the posts.jsonl copy kept for zooming."""
    ppath = Path(path) / "posts.jsonl"
    if not ppath.is_file():
        raise MissingFileError(f"no posts.jsonl under {path}")
    posts = []
    for line in ppath.read_text(encoding="utf-8").splitlines():
        obj = json.loads(line)
        posts.append(
            Post(
                id=obj.get("id", ""),
                text=obj["text"],
                lat=obj["lat"],
                lon=obj["lon"],
                lang=obj.get("lang"),
                timestamp=obj.get("timestamp"),
            )
        )
    return posts


# --- rendering ---------------------------------------------------------


@dataclass(frozen=True)
class ColorRamp:
    """Piecewise-linear score-to-RGB ramp over [0, 1]."""

    stops: tuple[tuple[float, tuple[int, int, int]], ...]

    def __post_init__(self):
        ts = [t for t, _ in self.stops]
        if not ts or ts[0] != 0.0 or ts[-1] != 1.0 or any(
            b <= a for a, b in zip(ts, ts[1:])
        ):
            raise ValueError("ramp thresholds must strictly increase from 0 to 1")

    def color(self, score: float) -> tuple[int, int, int]:
        s = min(max(score, 0.0), 1.0)
        for (t0, c0), (t1, c1) in zip(self.stops, self.stops[1:]):
            if s <= t1:
                f = (s - t0) / (t1 - t0)
                return tuple(round(a + f * (b - a)) for a, b in zip(c0, c1))
        return self.stops[-1][1]


# Dark blue through red to pale yellow; the web UI mirrors these stops.
DEFAULT_RAMP = ColorRamp(
    stops=(
        (0.0, (10, 10, 40)),
        (0.5, (200, 50, 30)),
        (1.0, (255, 240, 170)),
    )
)

ASCII_RAMP = " .:-=+*#%@"


def heatmap_geojson(heat: HeatMap) -> dict:
    """One closed Polygon per grid cell, GeoJSON (lon, lat) order, row-major."""
    features = []
    for cell in heat.grid.all_cells():
        box = cell_bbox(heat.grid, cell)
        ring = [
            [box.min_lon, box.min_lat],
            [box.max_lon, box.min_lat],
            [box.max_lon, box.max_lat],
            [box.min_lon, box.max_lat],
            [box.min_lon, box.min_lat],
        ]
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Polygon", "coordinates": [ring]},
                "properties": {
                    "row": cell.row,
                    "col": cell.col,
                    "score": heat.score(cell),
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}


def heatmap_image(
    heat: HeatMap, ramp: ColorRamp = DEFAULT_RAMP, cell_px: int = 16
) -> bytes:
    """Binary portable pixmap (P6); grid row 0 renders at the top."""
    if cell_px < 1:
        raise ValueError("cell_px must be >= 1")
    rows, cols = heat.grid.rows, heat.grid.cols
    width, height = cols * cell_px, rows * cell_px
    body = bytearray()
    for r in range(rows):
        row_px = bytearray()
        for c in range(cols):
            row_px += bytes(ramp.color(heat.score(CellId(r, c)))) * cell_px
        body += bytes(row_px) * cell_px
    return f"P6\n{width} {height}\n255\n".encode("ascii") + bytes(body)


def heatmap_ascii(heat: HeatMap) -> str:
    """Terminal preview: one character per cell by score decile, row 0 on top."""
    lines = []
    for r in range(heat.grid.rows):
        line = "".join(
            ASCII_RAMP[min(int(heat.score(CellId(r, c)) * 10), 9)]
            for c in range(heat.grid.cols)
        )
        lines.append(line)
    return "\n".join(lines)
