/**
 * End-to-end acceptance for the UI against recorded wire traffic from a
 * live service run (tests/fixtures/session_script.json holds the exact
 * response bodies of a 5-click + 1-undo session).
 */
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { ApiClient, ClickResponse, CreateSessionResponse, SessionState, Transport } from "../src/api";
import { decodeGridBase64, gridDiffIndices } from "../src/grid";
import { heatmapPixels, insideWindow } from "../src/render";
import { SessionStore } from "../src/session-store";

interface SessionScript {
  created: CreateSessionResponse;
  steps: { request: { row: number; col: number; label: string }; response: ClickResponse }[];
  undo_state: SessionState;
  final_state: SessionState;
}

const script: SessionScript = JSON.parse(
  readFileSync(fileURLToPath(new URL("./fixtures/session_script.json", import.meta.url)), "utf-8"),
);

describe("acceptance", () => {
  it("after a foreground click, the modulated map differs from the raw map only inside the reported window", () => {
    const step = script.steps[0];
    expect(step.request.label).toBe("foreground");
    const raw = decodeGridBase64(step.response.p_prev_grid_b64);
    const modulated = decodeGridBase64(step.response.p_mod_grid_b64);
    const diffs = gridDiffIndices(raw, modulated);
    expect(diffs.length).toBeGreaterThan(0);
    const win = step.response.modulation_window;
    expect(win.row).toBe(step.request.row);
    expect(win.col).toBe(step.request.col);
    for (const i of diffs) {
      const row = Math.floor(i / raw.width);
      const col = i % raw.width;
      expect(insideWindow(row, col, win)).toBe(true);
    }
  });

  it("modulation pushes the clicked pixel's probability up for a foreground click", () => {
    const step = script.steps[0];
    const raw = decodeGridBase64(step.response.p_prev_grid_b64);
    const modulated = decodeGridBase64(step.response.p_mod_grid_b64);
    const i = step.request.row * raw.width + step.request.col;
    expect(modulated.values[i]).toBeGreaterThanOrEqual(raw.values[i]);
    expect(modulated.values[i]).toBeGreaterThan(0.98);
  });

  it("heatmap pixels derive solely from server-sent grid bytes", () => {
    const grid = decodeGridBase64(script.steps[0].response.p_mod_grid_b64);
    const pixels = heatmapPixels(grid);
    expect(pixels.length).toBe(grid.width * grid.height * 4);
    for (let i = 0; i < grid.values.length; i++) {
      expect(pixels[i * 4 + 3]).toBe(255);
    }
  });

  it("marker count equals the server round count after the 5-click / 1-undo script", async () => {
    let step = 0;
    const transport: Transport = {
      async request(_method, path, body) {
        if (path === "/sessions") {
          return script.created;
        }
        if (path.endsWith("/clicks")) {
          expect(body).toEqual(script.steps[step].request);
          return script.steps[step++].response;
        }
        if (path.endsWith("/undo")) {
          return script.undo_state;
        }
        throw new Error(`unexpected request: ${path}`);
      },
    };
    const store = new SessionStore(new ApiClient(transport));
    await store.createSession({ image_png_b64: "unused-by-stub" });
    for (const s of script.steps) {
      void store.placeClick(s.request.row, s.request.col, s.request.label as "foreground" | "background");
    }
    void store.undoLast();
    await store.idle();
    expect(script.steps).toHaveLength(5);
    expect(store.state.markers).toHaveLength(script.undo_state.round);
    expect(store.state.markers).toHaveLength(4);
  });
});
