"""HTTP facade over a saved model: query, heat maps, and drill-down zoom.

Zoomed ensembles are built lazily on POST /zoom, given opaque ids, and
kept in a bounded LRU cache (the root model is never evicted).
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional, Union

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import artifacts, ensemble as ens_mod
from .ensemble import ModelEnsemble
from .errors import EmptyCorpusError, EmptyQueryError, GeopercError
from .geogrid import CellId
from .ingest import Post

ROOT_ID = "root"


@dataclass
class ModelEntry:
    model_id: str
    ens: ModelEnsemble
    posts: list[Post]
    parent_id: Optional[str] = None


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code


class SessionState:
    """Root model plus an LRU cache of zoom descendants."""

    def __init__(self, root: ModelEntry, zoom_cache: int = 16):
        self.root = root
        self.zoom_cache = zoom_cache
        self._zoomed: OrderedDict[str, ModelEntry] = OrderedDict()
        self._next_zoom = 0
        self._lock = threading.Lock()
        self.request_count = 0

    def get(self, model_id: str) -> ModelEntry:
        if model_id == ROOT_ID:
            return self.root
        with self._lock:
            entry = self._zoomed.get(model_id)
            if entry is None:
                raise ApiError(404, "unknown-model", f"no model with id {model_id!r}")
            self._zoomed.move_to_end(model_id)
            return entry

    def add_zoom(self, entry_factory) -> ModelEntry:
        # Serialized so concurrent zooms never build duplicates; ids are
        # never reused within a process lifetime.
        with self._lock:
            self._next_zoom += 1
            model_id = f"z{self._next_zoom}"
            entry = entry_factory(model_id)
            self._zoomed[model_id] = entry
            while len(self._zoomed) > self.zoom_cache:
                self._zoomed.popitem(last=False)
            return entry

    def drop(self, model_id: str) -> bool:
        with self._lock:
            return self._zoomed.pop(model_id, None) is not None


def _heat_payload(heat, top_k: int = 10) -> dict:
    scores = [
        [cell.row, cell.col, heat.score(cell)] for cell in heat.grid.all_cells()
    ]
    top = [[c.row, c.col, s] for c, s in ens_mod.top_cells(heat, top_k)]
    return {"scores": scores, "degenerate": heat.degenerate, "top": top}


def create_app(
    model: Union[str, ModelEntry], zoom_cache: int = 16, cors: bool = True
) -> FastAPI:
    """Build the app around a model directory path or a prebuilt root entry."""
    if isinstance(model, ModelEntry):
        root = model
    else:
        root = ModelEntry(
            model_id=ROOT_ID,
            ens=artifacts.load_model(model),
            posts=artifacts.load_posts(model),
        )
    state = SessionState(root, zoom_cache=zoom_cache)

    app = FastAPI(title="geoperc")
    app.state.session = state
    if cors:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiError)
    async def api_error_handler(_req: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status, content={"error": str(exc), "code": exc.code}
        )

    @app.exception_handler(GeopercError)
    async def domain_error_handler(_req: Request, exc: GeopercError):
        return JSONResponse(
            status_code=500, content={"error": str(exc), "code": exc.code}
        )

    def model_meta(entry: ModelEntry) -> dict:
        g = entry.ens.grid
        return {
            "model": entry.model_id,
            "parent": entry.parent_id,
            "bbox": [g.bbox.min_lat, g.bbox.min_lon, g.bbox.max_lat, g.bbox.max_lon],
            "rows": g.rows,
            "cols": g.cols,
            "post_count": entry.ens.total_posts,
            "mode": entry.ens.config.mode,
        }

    def run_query(phrase: Optional[str], model_id: str):
        if phrase is None or not phrase.strip():
            raise ApiError(400, "empty-query", "query phrase is empty")
        entry = state.get(model_id)
        try:
            return entry, ens_mod.posterior(entry.ens, phrase)
        except EmptyQueryError as exc:
            raise ApiError(400, exc.code, str(exc))

    @app.get("/model")
    def get_model(model: str = ROOT_ID):
        state.request_count += 1
        return model_meta(state.get(model))

    @app.get("/query")
    def get_query(phrase: Optional[str] = None, model: str = ROOT_ID, top: int = 10):
        state.request_count += 1
        _, heat = run_query(phrase, model)
        return _heat_payload(heat, top)

    @app.get("/heatmap.geojson")
    def get_heatmap(phrase: Optional[str] = None, model: str = ROOT_ID):
        state.request_count += 1
        _, heat = run_query(phrase, model)
        return artifacts.heatmap_geojson(heat)

    @app.post("/zoom")
    def post_zoom(body: dict):
        state.request_count += 1
        try:
            parent_id = body.get("model", ROOT_ID)
            row, col = int(body["row"]), int(body["col"])
            rows = int(body.get("rows", 10))
            cols = int(body.get("cols", 10))
        except (KeyError, TypeError, ValueError):
            raise ApiError(400, "bad-request", "zoom body needs integer row and col")
        parent = state.get(parent_id)
        cell = CellId(row, col)
        if not (0 <= row < parent.ens.grid.rows and 0 <= col < parent.ens.grid.cols):
            raise ApiError(400, "bad-cell", f"cell ({row},{col}) outside the grid")
        try:
            child_ens, _ = ens_mod.zoom(parent.posts, parent.ens, cell, rows, cols)
        except EmptyCorpusError:
            raise ApiError(409, "empty-cell", f"cell ({row},{col}) has no posts")
        subset = ens_mod.posts_in_cell(parent.posts, parent.ens.grid, cell)

        entry = state.add_zoom(
            lambda mid: ModelEntry(
                model_id=mid, ens=child_ens, posts=subset, parent_id=parent_id
            )
        )
        return {"model": entry.model_id, **{k: v for k, v in model_meta(entry).items() if k != "model"}}

    @app.delete("/zoom/{model_id}")
    def delete_zoom(model_id: str):
        state.request_count += 1
        if model_id == ROOT_ID:
            raise ApiError(400, "bad-request", "the root model cannot be deleted")
        if not state.drop(model_id):
            raise ApiError(404, "unknown-model", f"no model with id {model_id!r}")
        return {"deleted": model_id}

    return app
