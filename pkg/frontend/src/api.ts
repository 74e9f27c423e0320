import type { GeoJsonDoc, ModelMeta, QueryResult, ZoomResult } from "./types.js";

/** Error carrying the service's JSON error code for banner display. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  try {
    const body = await resp.json();
    return new ApiError(resp.status, body.code ?? "unknown", body.error ?? resp.statusText);
  } catch {
    return new ApiError(resp.status, "unknown", resp.statusText);
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async get<T>(path: string, params: Record<string, string>): Promise<T> {
    const qs = new URLSearchParams(params).toString();
    const resp = await fetch(`${this.baseUrl}${path}${qs ? "?" + qs : ""}`);
    if (!resp.ok) throw await parseError(resp);
    return resp.json() as Promise<T>;
  }

  model(modelId: string = "root"): Promise<ModelMeta> {
    return this.get("/model", { model: modelId });
  }

  query(phrase: string, modelId: string = "root"): Promise<QueryResult> {
    return this.get("/query", { phrase, model: modelId });
  }

  heatmap(phrase: string, modelId: string = "root"): Promise<GeoJsonDoc> {
    return this.get("/heatmap.geojson", { phrase, model: modelId });
  }

  async zoom(
    parentId: string,
    row: number,
    col: number,
    rows = 10,
    cols = 10,
  ): Promise<ZoomResult> {
    const resp = await fetch(`${this.baseUrl}/zoom`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ model: parentId, row, col, rows, cols }),
    });
    if (!resp.ok) throw await parseError(resp);
    return resp.json() as Promise<ZoomResult>;
  }

  async dropZoom(modelId: string): Promise<void> {
    const resp = await fetch(`${this.baseUrl}/zoom/${modelId}`, { method: "DELETE" });
    if (!resp.ok && resp.status !== 404) throw await parseError(resp);
  }
}
