import { beforeEach, describe, expect, it } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";
import { FakeService } from "./fakeService.js";

let service: FakeService;
let api: ApiClient;

beforeEach(() => {
  service = new FakeService();
  service.install();
  api = new ApiClient("http://test");
});

describe("ApiClient", () => {
  it("fetches model metadata", async () => {
    const meta = await api.model();
    expect(meta.rows).toBe(2);
    expect(meta.cols).toBe(3);
    expect(service.calls[0].url).toContain("/model?model=root");
  });

  it("passes the phrase and model id as query parameters", async () => {
    await api.query("power outage", "z4");
    const url = service.calls[0].url;
    expect(url).toContain("phrase=power+outage");
    expect(url).toContain("model=z4");
  });

  it("posts the clicked cell on zoom", async () => {
    const zoomed = await api.zoom("root", 1, 2, 5, 5);
    expect(zoomed.model).toBe("z1");
    const call = service.calls[0];
    expect(call.method).toBe("POST");
    expect(call.body).toEqual({ model: "root", row: 1, col: 2, rows: 5, cols: 5 });
  });

  it("turns JSON error bodies into ApiError with the service code", async () => {
    service.failNext = { status: 409, code: "empty-cell", error: "cell (0,0) has no posts" };
    const err = await api.zoom("root", 0, 0).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.code).toBe("empty-cell");
  });

  it("tolerates a 404 when dropping an already-evicted zoom", async () => {
    service.failNext = { status: 404, code: "unknown-model", error: "gone" };
    await expect(api.dropZoom("z9")).resolves.toBeUndefined();
  });
});
