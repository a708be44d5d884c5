/**
 * Pure pixel-buffer builders for the canvas layers. Everything here returns
 * plain RGBA byte arrays; only main.ts touches the DOM, and every displayed
 * mask or heatmap byte originates from a server response.
 */

import { colorFor } from "./colormap";
import { Grid } from "./grid";

export function heatmapPixels(grid: Grid): Uint8ClampedArray {
  const out = new Uint8ClampedArray(grid.width * grid.height * 4);
  for (let i = 0; i < grid.values.length; i++) {
    const [r, g, b] = colorFor(grid.values[i]);
    out[i * 4] = r;
    out[i * 4 + 1] = g;
    out[i * 4 + 2] = b;
    out[i * 4 + 3] = 255;
  }
  return out;
}

/** Alpha-blend a binary mask (nonzero = object) over image pixels. */
export function maskOverlayPixels(
  imageRgba: Uint8ClampedArray,
  mask: Uint8Array,
  alpha = 0.5,
  tint: [number, number, number] = [255, 64, 64],
): Uint8ClampedArray {
  const out = new Uint8ClampedArray(imageRgba);
  for (let i = 0; i < mask.length; i++) {
    if (mask[i] !== 0) {
      out[i * 4] = Math.round((1 - alpha) * out[i * 4] + alpha * tint[0]);
      out[i * 4 + 1] = Math.round((1 - alpha) * out[i * 4 + 1] + alpha * tint[1]);
      out[i * 4 + 2] = Math.round((1 - alpha) * out[i * 4 + 2] + alpha * tint[2]);
    }
  }
  return out;
}

export interface ModulationWindow {
  row: number;
  col: number;
  radius: number;
}

/** Membership test matching the server's window rule: ||x-u|| <= R. */
export function insideWindow(row: number, col: number, win: ModulationWindow): boolean {
  const dr = row - win.row;
  const dc = col - win.col;
  return dr * dr + dc * dc <= win.radius * win.radius;
}
