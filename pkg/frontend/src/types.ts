/** Wire types for the geoperc HTTP service. */

export interface ModelMeta {
  model: string;
  parent: string | null;
  bbox: [number, number, number, number]; // min_lat, min_lon, max_lat, max_lon
  rows: number;
  cols: number;
  post_count: number;
  mode: string;
}

/** Per-cell posterior entries as [row, col, score]. */
export type ScoreTriple = [number, number, number];

export interface QueryResult {
  scores: ScoreTriple[];
  degenerate: boolean;
  top: ScoreTriple[];
}

export interface ZoomResult extends Omit<ModelMeta, "model" | "parent"> {
  model: string;
  parent: string | null;
}

export interface GeoJsonFeature {
  type: "Feature";
  geometry: { type: "Polygon"; coordinates: number[][][] };
  properties: { row: number; col: number; score: number };
}

export interface GeoJsonDoc {
  type: "FeatureCollection";
  features: GeoJsonFeature[];
}

export interface ServiceError {
  error: string;
  code: string;
}
