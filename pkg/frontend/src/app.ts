import { ApiClient, ApiError } from "./api.js";
import { rampCss } from "./color.js";
import { initialState, popTo, pushZoom, ViewState, zoomDepth } from "./state.js";
import type { GeoJsonDoc, ModelMeta } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const MAP_SIZE = 600;

/** Single-page client: query box, polygon heat map, breadcrumb, banner.
 *  At most one query is in flight; stale responses are discarded by
 *  comparing a monotonically increasing request sequence number. */
export class App {
  state: ViewState = initialState();
  private seq = 0;

  private queryInput!: HTMLInputElement;
  private banner!: HTMLDivElement;
  private mapSvg!: SVGSVGElement;
  private crumbBar!: HTMLDivElement;
  private topList!: HTMLOListElement;
  private note!: HTMLDivElement;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
  ) {}

  mount(): void {
    const doc = this.root.ownerDocument;
    this.root.innerHTML = "";

    const form = doc.createElement("form");
    form.className = "query-form";
    this.queryInput = doc.createElement("input");
    this.queryInput.type = "text";
    this.queryInput.placeholder = "perception phrase, e.g. power outage";
    this.queryInput.className = "query-input";
    const button = doc.createElement("button");
    button.type = "submit";
    button.textContent = "Query";
    form.append(this.queryInput, button);
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      this.submitQuery(this.queryInput.value);
    });

    this.banner = doc.createElement("div");
    this.banner.className = "banner hidden";

    this.crumbBar = doc.createElement("div");
    this.crumbBar.className = "breadcrumb";

    this.mapSvg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    this.mapSvg.setAttribute("viewBox", `0 0 ${MAP_SIZE} ${MAP_SIZE}`);
    this.mapSvg.setAttribute("class", "heatmap");

    this.note = doc.createElement("div");
    this.note.className = "note hidden";

    this.topList = doc.createElement("ol");
    this.topList.className = "top-cells";

    this.root.append(form, this.banner, this.crumbBar, this.mapSvg, this.note, this.topList);
    this.renderBreadcrumb();
  }

  /** Run the phrase against the current model and redraw the map. */
  async submitQuery(phrase: string): Promise<void> {
    if (!phrase.trim()) {
      this.showBanner("empty-query", "type a phrase first");
      return;
    }
    this.state = { ...this.state, phrase };
    const mySeq = ++this.seq;
    try {
      const [result, geo] = await Promise.all([
        this.api.query(phrase, this.state.modelId),
        this.api.heatmap(phrase, this.state.modelId),
      ]);
      if (mySeq !== this.seq) return; // stale response, a newer query won
      this.state = { ...this.state, result };
      this.hideBanner();
      this.renderMap(geo, result.degenerate);
      this.renderTop();
    } catch (err) {
      if (mySeq !== this.seq) return;
      this.handleError(err);
    }
  }

  /** Zoom into a cell, push a breadcrumb, and re-run the current phrase. */
  async zoomInto(row: number, col: number): Promise<void> {
    try {
      const zoomed = await this.api.zoom(this.state.modelId, row, col);
      this.state = pushZoom(this.state, zoomed.model, row, col);
      this.renderBreadcrumb();
      this.hideBanner();
      if (this.state.phrase) await this.submitQuery(this.state.phrase);
    } catch (err) {
      this.handleError(err);
    }
  }

  /** Breadcrumb click: pop back to an ancestor model and re-query. */
  async popBreadcrumb(index: number): Promise<void> {
    this.state = popTo(this.state, index);
    this.renderBreadcrumb();
    if (this.state.phrase) await this.submitQuery(this.state.phrase);
  }

  get depth(): number {
    return zoomDepth(this.state);
  }

  private renderMap(geo: GeoJsonDoc, degenerate: boolean): void {
    this.mapSvg.innerHTML = "";

    // degree-space extent of the polygons, fitted to the viewport
    let minLon = Infinity, maxLon = -Infinity, minLat = Infinity, maxLat = -Infinity;
    for (const f of geo.features) {
      for (const [lon, lat] of f.geometry.coordinates[0]) {
        minLon = Math.min(minLon, lon);
        maxLon = Math.max(maxLon, lon);
        minLat = Math.min(minLat, lat);
        maxLat = Math.max(maxLat, lat);
      }
    }
    const sx = (lon: number) => ((lon - minLon) / (maxLon - minLon)) * MAP_SIZE;
    const sy = (lat: number) => ((maxLat - lat) / (maxLat - minLat)) * MAP_SIZE;

    for (const f of geo.features) {
      const { row, col, score } = f.properties;
      const points = f.geometry.coordinates[0]
        .map(([lon, lat]) => `${sx(lon)},${sy(lat)}`)
        .join(" ");
      const poly = this.mapSvg.ownerDocument.createElementNS(SVG_NS, "polygon");
      poly.setAttribute("points", points);
      poly.setAttribute("class", "cell");
      poly.setAttribute("data-row", String(row));
      poly.setAttribute("data-col", String(col));
      if (degenerate) {
        poly.setAttribute("fill", "#888888");
        poly.setAttribute("fill-opacity", "0.4");
      } else {
        poly.setAttribute("fill", rampCss(score));
        poly.setAttribute("fill-opacity", String(0.15 + 0.85 * Math.min(score, 1)));
      }
      poly.setAttribute("stroke", "#333");
      poly.setAttribute("stroke-width", "0.5");
      poly.addEventListener("click", () => this.zoomInto(row, col));
      this.mapSvg.appendChild(poly);
    }

    this.note.textContent = degenerate
      ? "No cell assigns this phrase a positive likelihood; showing a uniform layer."
      : "";
    this.note.classList.toggle("hidden", !degenerate);
  }

  private renderTop(): void {
    this.topList.innerHTML = "";
    const result = this.state.result;
    if (!result) return;
    for (const [row, col, score] of result.top.slice(0, 5)) {
      const li = this.topList.ownerDocument.createElement("li");
      li.textContent = `(${row},${col})  ${score.toFixed(4)}`;
      this.topList.appendChild(li);
    }
  }

  private renderBreadcrumb(): void {
    this.crumbBar.innerHTML = "";
    this.state.breadcrumb.forEach((crumb, i) => {
      const link = this.crumbBar.ownerDocument.createElement("a");
      link.textContent = crumb.label;
      link.href = "#";
      link.className = "crumb";
      link.addEventListener("click", (ev) => {
        ev.preventDefault();
        this.popBreadcrumb(i);
      });
      this.crumbBar.appendChild(link);
      if (i < this.state.breadcrumb.length - 1) {
        this.crumbBar.appendChild(this.crumbBar.ownerDocument.createTextNode(" › "));
      }
    });
  }

  private handleError(err: unknown): void {
    if (err instanceof ApiError) {
      this.showBanner(err.code, err.message);
    } else {
      this.showBanner("network", String(err));
    }
  }

  showBanner(code: string, message: string): void {
    this.banner.innerHTML = "";
    const doc = this.banner.ownerDocument;
    const text = doc.createElement("span");
    text.textContent = `${code}: ${message}`;
    text.className = "banner-code";
    const dismiss = doc.createElement("button");
    dismiss.textContent = "×";
    dismiss.className = "banner-dismiss";
    dismiss.addEventListener("click", () => this.hideBanner());
    this.banner.append(text, dismiss);
    this.banner.classList.remove("hidden");
  }

  hideBanner(): void {
    this.banner.classList.add("hidden");
    this.banner.innerHTML = "";
  }
}

export async function bootstrap(
  root: HTMLElement,
  baseUrl: string,
): Promise<{ app: App; meta: ModelMeta }> {
  const api = new ApiClient(baseUrl);
  const app = new App(root, api);
  app.mount();
  const meta = await api.model();
  return { app, meta };
}
