"""Build a model ensemble from a synthetic corpus and query a perception.

Walks the core loop end to end: generate geo-tagged posts with a planted
"power outage" hot spot, train one bigram model per grid cell, then ask
the ensemble where that perception runs strongest.

Run:  python3 demos/01_build_and_query.py
"""

from geoperc import BBox, CellId, EstimatorConfig, PrepConfig, make_grid
from geoperc.artifacts import heatmap_ascii
from geoperc.ensemble import build_ensemble, posterior, top_cells
from geoperc.synth import SynthSpec, generate

# A coarse grid over a one-degree box, hot spot planted northeast of center.
grid = make_grid(BBox(41.0, -73.0, 42.0, -72.0), rows=6, cols=6)
planted = CellId(4, 4)
posts = generate(
    SynthSpec(
        grid=grid,
        planted=planted,
        posts_per_cell=80,
        background_rate=0.01,
        signal_multiplier=50.0,
        seed=42,
    )
)
print(f"{len(posts)} synthetic posts, signal planted in cell ({planted.row},{planted.col})")

# The synthetic vocabulary is small, so stopword derivation is disabled;
# with real social-media corpora keep the default 200-word list.
ens, report = build_ensemble(
    posts,
    grid,
    EstimatorConfig(mode="mkn_normalizing", lambda1=0.5),
    PrepConfig(stopword_size=0, singleton_threshold=1),
)
print(f"retained {report.retained} posts; {report.misc_percent} of occurrences misc-mapped")

heat = posterior(ens, "power outage")
print("\nhottest cells for 'power outage':")
for cell, score in top_cells(heat, 5):
    print(f"  ({cell.row},{cell.col})  {score:.4f}")

print("\nheat map (row 0 at top, one char per cell):")
print(heatmap_ascii(heat))

# A phrase nobody concentrates on spreads its mass broadly instead.
flat = posterior(ens, "coffee morning")
print("\nheat map for the background phrase 'coffee morning':")
print(heatmap_ascii(flat))
