"""Equal-degree grid partition of a lat/lon bounding box."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class BBox:
    min_lat: float
    min_lon: float
    max_lat: float
    max_lon: float

    def __post_init__(self):
        if not (-90.0 <= self.min_lat < self.max_lat <= 90.0):
            raise ValueError(f"bad latitude range [{self.min_lat}, {self.max_lat}]")
        if not (-180.0 <= self.min_lon < self.max_lon <= 180.0):
            raise ValueError(f"bad longitude range [{self.min_lon}, {self.max_lon}]")

    def contains(self, lat: float, lon: float) -> bool:
        return self.min_lat <= lat <= self.max_lat and self.min_lon <= lon <= self.max_lon


@dataclass(frozen=True, order=True)
class CellId:
    row: int
    col: int


@dataclass(frozen=True)
class GridSpec:
    bbox: BBox
    rows: int = 10
    cols: int = 10

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid must have at least one row and one column")

    @property
    def cell_height(self) -> float:
        return (self.bbox.max_lat - self.bbox.min_lat) / self.rows

    @property
    def cell_width(self) -> float:
        return (self.bbox.max_lon - self.bbox.min_lon) / self.cols

    def all_cells(self):
        for r in range(self.rows):
            for c in range(self.cols):
                yield CellId(r, c)


def make_grid(bbox: BBox, rows: int = 10, cols: int = 10) -> GridSpec:
    return GridSpec(bbox=bbox, rows=rows, cols=cols)


def locate(grid: GridSpec, lat: float, lon: float) -> Optional[CellId]:
    """Cell containing (lat, lon), or None when the point is outside the bbox.

    Points exactly on the max_lat/max_lon boundary fall into the last row/col
    so no in-bbox point is ever dropped.
    """
    b = grid.bbox
    if not b.contains(lat, lon):
        return None
    row = min(int(math.floor((lat - b.min_lat) / grid.cell_height)), grid.rows - 1)
    col = min(int(math.floor((lon - b.min_lon) / grid.cell_width)), grid.cols - 1)
    return CellId(row, col)


def cell_bbox(grid: GridSpec, cell: CellId) -> BBox:
    if not (0 <= cell.row < grid.rows and 0 <= cell.col < grid.cols):
        raise ValueError(f"cell ({cell.row},{cell.col}) out of range for {grid.rows}x{grid.cols} grid")
    b = grid.bbox
    return BBox(
        min_lat=b.min_lat + cell.row * grid.cell_height,
        min_lon=b.min_lon + cell.col * grid.cell_width,
        max_lat=b.min_lat + (cell.row + 1) * grid.cell_height,
        max_lon=b.min_lon + (cell.col + 1) * grid.cell_width,
    )
