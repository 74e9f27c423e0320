"""Serve a model over HTTP and exercise every endpoint in-process.

Uses the test client so no port is opened; swap the last block for
uvicorn (or `geoperc serve`) to run a real server.

Run:  python3 demos/04_http_service.py
"""

from fastapi.testclient import TestClient

from geoperc import BBox, CellId, EstimatorConfig, PrepConfig, make_grid
from geoperc.ensemble import build_ensemble
from geoperc.service import ModelEntry, create_app
from geoperc.synth import SynthSpec, generate

grid = make_grid(BBox(41.0, -73.0, 42.0, -72.0), 10, 10)
posts = generate(SynthSpec(grid=grid, planted=CellId(2, 8), posts_per_cell=80, seed=5))
ens, _ = build_ensemble(posts, grid, EstimatorConfig(), PrepConfig(stopword_size=0))
app = create_app(ModelEntry(model_id="root", ens=ens, posts=posts))

with TestClient(app) as client:
    print("GET /model ->", client.get("/model").json())

    q = client.get("/query", params={"phrase": "power outage"}).json()
    print("\nGET /query top cells:", q["top"][:3])

    gj = client.get("/heatmap.geojson", params={"phrase": "power outage"}).json()
    print(f"GET /heatmap.geojson -> {len(gj['features'])} polygons")

    top_row, top_col, _ = q["top"][0]
    z = client.post("/zoom", json={"row": top_row, "col": top_col}).json()
    print(f"\nPOST /zoom into ({top_row},{top_col}) -> model id {z['model']}")

    zq = client.get(
        "/query", params={"phrase": "power outage", "model": z["model"]}
    ).json()
    print("zoomed top cells:", zq["top"][:3])

    err = client.post("/zoom", json={"model": z["model"], "row": 0, "col": 0, "rows": 90, "cols": 90})
    print("\nzoom into an empty sub-cell ->", err.status_code, err.json())

    print("DELETE /zoom ->", client.delete(f"/zoom/{z['model']}").json())

# To serve for real:
#   geoperc serve --model path/to/model --bind 0.0.0.0 --port 8080
