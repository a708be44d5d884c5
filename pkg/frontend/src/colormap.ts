/**
 * Fixed 256-entry monotone color map for probability heatmaps.
 *
 * Both the raw and the modulated probability layers render through this same
 * table (same scale), so the two views are directly comparable. The map runs
 * dark blue (p=0) -> magenta (p=0.5) -> warm yellow (p=1); perceived
 * brightness increases monotonically with p.
 */

export const COLORMAP_SIZE = 256;

const table: Uint8Array = buildTable();

function buildTable(): Uint8Array {
  const t = new Uint8Array(COLORMAP_SIZE * 3);
  for (let i = 0; i < COLORMAP_SIZE; i++) {
    const x = i / (COLORMAP_SIZE - 1);
    // smooth ramps, each channel non-decreasing in x
    const r = Math.round(255 * Math.min(1, 1.6 * x));
    const g = Math.round(255 * x * x);
    const b = Math.round(255 * (0.35 + 0.65 * x * (1 - 0.6 * x)));
    t[i * 3] = r;
    t[i * 3 + 1] = g;
    t[i * 3 + 2] = Math.min(255, b);
  }
  return t;
}

/** RGB triple for a probability in [0, 1]. */
export function colorFor(p: number): [number, number, number] {
  const clamped = Math.min(1, Math.max(0, p));
  const i = Math.round(clamped * (COLORMAP_SIZE - 1));
  return [table[i * 3], table[i * 3 + 1], table[i * 3 + 2]];
}

/** Perceived brightness (Rec. 601 luma), used to verify monotonicity. */
export function luma(rgb: [number, number, number]): number {
  return 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2];
}
