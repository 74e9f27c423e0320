"""Command-line front door: build, query, zoom, synth, inspect, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import artifacts, ensemble, ingest, synth
from .errors import (
    EmptyCorpusError,
    EmptyQueryError,
    GeopercError,
    ModelLoadError,
)
from .geogrid import BBox, CellId, make_grid
from .lmcore import MODES, EstimatorConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract here is exit 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error[usage]: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _bbox_arg(raw: str) -> BBox:
    parts = raw.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected min_lat,min_lon,max_lat,max_lon")
    try:
        return BBox(*(float(p) for p in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _cell_arg(raw: str) -> CellId:
    parts = raw.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected row,col")
    try:
        return CellId(int(parts[0]), int(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError("expected integer row,col")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="geoperc", description=__doc__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    def add_model_knobs(sp):
        sp.add_argument("--mode", choices=MODES, default="mkn_normalizing")
        sp.add_argument("--lambda1", type=float, default=0.5)
        sp.add_argument("--stopwords", type=int, default=200, help="stopword list size")
        sp.add_argument("--singleton-threshold", type=int, default=1)

    b = sub.add_parser("build", help="ingest posts and build a model directory")
    b.add_argument("--in", dest="input", required=True, help="posts JSONL (.gz ok)")
    b.add_argument("--out", required=True, help="model directory to write")
    b.add_argument("--bbox", type=_bbox_arg, required=True)
    b.add_argument("--rows", type=int, default=10)
    b.add_argument("--cols", type=int, default=10)
    b.add_argument("--lang", default="en,und", help="comma-separated language filter")
    b.add_argument("--dedupe", action="store_true", help="drop duplicate post ids")
    add_model_knobs(b)

    q = sub.add_parser("query", help="score a phrase against a saved model")
    q.add_argument("--model", required=True)
    q.add_argument("--phrase", required=True)
    q.add_argument("--top-k", type=int, default=5)
    q.add_argument("--format", choices=("ascii", "geojson", "ppm", "none"), default="ascii")
    q.add_argument("--out", help="write rendering here instead of stdout")
    q.add_argument("--cell-px", type=int, default=16)

    z = sub.add_parser("zoom", help="rebuild a finer model inside one cell")
    z.add_argument("--model", required=True)
    z.add_argument("--cell", type=_cell_arg, required=True, help="row,col")
    z.add_argument("--rows", type=int, default=10)
    z.add_argument("--cols", type=int, default=10)
    z.add_argument("--out", required=True)

    s = sub.add_parser("synth", help="emit a synthetic planted-signal corpus")
    s.add_argument("--out", required=True, help="posts JSONL to write")
    s.add_argument("--bbox", type=_bbox_arg, default=BBox(41.0, -73.0, 42.0, -72.0))
    s.add_argument("--rows", type=int, default=10)
    s.add_argument("--cols", type=int, default=10)
    s.add_argument("--planted-cell", type=_cell_arg, default=CellId(3, 7))
    s.add_argument("--posts-per-cell", type=int, default=30)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--phrase", default="power outage", help="two-word planted phrase")

    i = sub.add_parser("inspect", help="dump a cell's top bigrams")
    i.add_argument("--model", required=True)
    i.add_argument("--cell", type=_cell_arg, required=True)
    i.add_argument("--top", type=int, default=20)

    v = sub.add_parser("serve", help="serve a model over HTTP")
    v.add_argument("--model", required=True)
    v.add_argument("--bind", default="127.0.0.1")
    v.add_argument("--port", type=int, default=8080)
    v.add_argument("--zoom-cache", type=int, default=16)
    v.add_argument("--no-cors", action="store_true")
    return p


def _cmd_build(args) -> int:
    posts, ing = ingest.read_posts_file(
        args.input,
        lang_filter=frozenset(args.lang.split(",")),
        dedupe=args.dedupe,
    )
    grid = make_grid(args.bbox, args.rows, args.cols)
    cfg = EstimatorConfig(mode=args.mode, lambda1=args.lambda1)
    prep = ensemble.PrepConfig(
        stopword_size=args.stopwords, singleton_threshold=args.singleton_threshold
    )
    ens, report = ensemble.build_ensemble(posts, grid, cfg, prep)
    retained = [p for p in posts if grid.bbox.contains(p.lat, p.lon)]
    artifacts.save_model(ens, args.out, posts=retained)
    print(f"lines read:        {ing.total_lines}")
    for reason, n in sorted(ing.rejected.items()):
        print(f"rejected {reason}: {n}")
    print(f"posts accepted:    {ing.accepted}")
    print(f"outside bbox:      {report.dropped_outside}")
    print(f"posts retained:    {report.retained}")
    print(f"cells with posts:  {len(ens.cells)}")
    print(f"misc-mapped:       {report.misc_percent} of token occurrences")
    print(f"model written to:  {args.out}")
    return EXIT_OK


def _cmd_query(args) -> int:
    ens = artifacts.load_model(args.model)
    heat = ensemble.posterior(ens, args.phrase)
    if heat.degenerate:
        print("degenerate: no cell assigns this phrase a positive likelihood")
    for cell, score in ensemble.top_cells(heat, args.top_k):
        print(f"({cell.row},{cell.col})\t{score:.6f}")

    if args.format == "none":
        return EXIT_OK
    if args.format == "ascii":
        rendering: bytes = (artifacts.heatmap_ascii(heat) + "\n").encode("utf-8")
    elif args.format == "geojson":
        rendering = (
            json.dumps(artifacts.heatmap_geojson(heat), sort_keys=True) + "\n"
        ).encode("utf-8")
    else:
        rendering = artifacts.heatmap_image(heat, cell_px=args.cell_px)
    if args.out:
        Path(args.out).write_bytes(rendering)
        print(f"rendering written to: {args.out}")
    else:
        if args.format == "ppm":
            sys.stdout.buffer.write(rendering)
        else:
            sys.stdout.write(rendering.decode("utf-8"))
    return EXIT_OK


def _cmd_zoom(args) -> int:
    parent = artifacts.load_model(args.model)
    posts = artifacts.load_posts(args.model)
    child, report = ensemble.zoom(posts, parent, args.cell, args.rows, args.cols)
    subset = ensemble.posts_in_cell(posts, parent.grid, args.cell)
    artifacts.save_model(child, args.out, posts=subset)
    print(f"posts in cell ({args.cell.row},{args.cell.col}): {report.retained}")
    print(f"zoomed model written to: {args.out}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    phrase = tuple(args.phrase.split())
    if len(phrase) != 2:
        print("error[usage]: --phrase must be exactly two words", file=sys.stderr)
        return EXIT_USAGE
    spec = synth.SynthSpec(
        grid=make_grid(args.bbox, args.rows, args.cols),
        planted=args.planted_cell,
        posts_per_cell=args.posts_per_cell,
        phrase=phrase,
        seed=args.seed,
    )
    posts = synth.generate(spec)
    with open(args.out, "w", encoding="utf-8") as fh:
        for p in posts:
            fh.write(
                json.dumps(
                    {"id": p.id, "text": p.text, "lat": p.lat, "lon": p.lon, "lang": p.lang},
                    sort_keys=True,
                )
                + "\n"
            )
    print(f"{len(posts)} posts written to {args.out}")
    print(f"planted cell: ({args.planted_cell.row},{args.planted_cell.col})")
    print(f"planted phrase: {' '.join(phrase)}")
    return EXIT_OK


def _cmd_inspect(args) -> int:
    ens = artifacts.load_model(args.model)
    model = ens.cells.get(args.cell)
    if model is None:
        print(f"error[empty-cell]: cell ({args.cell.row},{args.cell.col}) has no posts", file=sys.stderr)
        return EXIT_DATA
    print(f"cell ({args.cell.row},{args.cell.col}): "
          f"{ens.post_counts[args.cell]} posts, "
          f"{model.counts.total_tokens} tokens, "
          f"{model.counts.continuation_total} bigram types")
    d = model.discounts
    print(f"discounts: d1={d.d1:.4f} d2={d.d2:.4f} d3={d.d3:.4f}")
    ranked = sorted(model.counts.bigram.items(), key=lambda kv: (-kv[1], kv[0]))
    for (a, b), cnt in ranked[: args.top]:
        print(f"{cnt}\t{a} {b}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        args.model, zoom_cache=args.zoom_cache, cors=not args.no_cors
    )
    uvicorn.run(app, host=args.bind, port=args.port)
    return EXIT_OK


_COMMANDS = {
    "build": _cmd_build,
    "query": _cmd_query,
    "zoom": _cmd_zoom,
    "synth": _cmd_synth,
    "inspect": _cmd_inspect,
    "serve": _cmd_serve,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.subcommand](args)
    except (EmptyCorpusError, EmptyQueryError) as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ModelLoadError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, GeopercError) as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
