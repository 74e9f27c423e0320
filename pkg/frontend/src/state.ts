import type { QueryResult } from "./types.js";

/** One breadcrumb entry: a model id plus the cell that was zoomed into. */
export interface Crumb {
  modelId: string;
  label: string;
}

/** What the page shows; the UI never computes probabilities itself. */
export interface ViewState {
  modelId: string;
  phrase: string;
  result: QueryResult | null;
  breadcrumb: Crumb[];
}

export function initialState(): ViewState {
  return {
    modelId: "root",
    phrase: "",
    result: null,
    breadcrumb: [{ modelId: "root", label: "root" }],
  };
}

export function pushZoom(state: ViewState, modelId: string, row: number, col: number): ViewState {
  return {
    ...state,
    modelId,
    result: null,
    breadcrumb: [...state.breadcrumb, { modelId, label: `(${row},${col})` }],
  };
}

/** Pop back to the breadcrumb at `index`; root (index 0) always survives. */
export function popTo(state: ViewState, index: number): ViewState {
  const clamped = Math.max(0, Math.min(index, state.breadcrumb.length - 1));
  const breadcrumb = state.breadcrumb.slice(0, clamped + 1);
  return {
    ...state,
    modelId: breadcrumb[breadcrumb.length - 1].modelId,
    result: null,
    breadcrumb,
  };
}

export function zoomDepth(state: ViewState): number {
  return state.breadcrumb.length - 1;
}
