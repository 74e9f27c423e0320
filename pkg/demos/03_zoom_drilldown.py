"""Drill-down workflow: query, zoom into the hottest cell, re-query.

Also writes the renderings (GeoJSON and a portable pixmap) next to this
script so the output formats can be inspected.

Run:  python3 demos/03_zoom_drilldown.py
"""

import json
from pathlib import Path

from geoperc import BBox, CellId, EstimatorConfig, PrepConfig, make_grid
from geoperc.artifacts import heatmap_ascii, heatmap_geojson, heatmap_image
from geoperc.ensemble import build_ensemble, posterior, top_cells, zoom
from geoperc.synth import SynthSpec, generate

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

grid = make_grid(BBox(41.0, -73.0, 42.0, -72.0), 10, 10)
posts = generate(SynthSpec(grid=grid, planted=CellId(2, 8), posts_per_cell=80, seed=11))
prep = PrepConfig(stopword_size=0, singleton_threshold=1)
ens, _ = build_ensemble(posts, grid, EstimatorConfig(), prep)

heat = posterior(ens, "power outage")
(hot, score), = top_cells(heat, 1)
print(f"top-level heat map; hottest cell ({hot.row},{hot.col}) at {score:.3f}")
print(heatmap_ascii(heat))

(out_dir / "level0.geojson").write_text(json.dumps(heatmap_geojson(heat), indent=2))
(out_dir / "level0.ppm").write_bytes(heatmap_image(heat, cell_px=24))
print(f"\nwrote {out_dir}/level0.geojson and level0.ppm")

# Zoom: rebuild a fresh 10x10 ensemble on just the posts inside the hot
# cell; stopwords and discounts are re-derived on the sub-corpus.
child, sub_report = zoom(posts, ens, hot, rows=10, cols=10)
print(f"\nzoomed into ({hot.row},{hot.col}): {sub_report.retained} posts, "
      f"bbox {child.grid.bbox}")

sub_heat = posterior(child, "power outage")
print(heatmap_ascii(sub_heat))
print("\nhottest sub-cells:")
for cell, s in top_cells(sub_heat, 3):
    print(f"  ({cell.row},{cell.col})  {s:.4f}")

(out_dir / "level1.geojson").write_text(json.dumps(heatmap_geojson(sub_heat), indent=2))
print(f"wrote {out_dir}/level1.geojson")
