/**
 * Decoder for the lossless MFPGRID v1 wire format used by the session
 * service: ASCII header "MFPGRID 1 <width> <height>\n" followed by
 * width*height little-endian float32 values, row-major.
 */

export interface Grid {
  width: number;
  height: number;
  values: Float32Array;
}

export function decodeGrid(buffer: ArrayBuffer): Grid {
  const bytes = new Uint8Array(buffer);
  let newline = -1;
  for (let i = 0; i < Math.min(bytes.length, 64); i++) {
    if (bytes[i] === 0x0a) {
      newline = i;
      break;
    }
  }
  if (newline < 0) {
    throw new Error("MFPGRID: missing header line");
  }
  const header = new TextDecoder("ascii").decode(bytes.subarray(0, newline));
  const parts = header.split(" ");
  if (parts.length !== 4 || parts[0] !== "MFPGRID" || parts[1] !== "1") {
    throw new Error(`MFPGRID: bad header "${header}"`);
  }
  const width = parseInt(parts[2], 10);
  const height = parseInt(parts[3], 10);
  if (!(width >= 1) || !(height >= 1)) {
    throw new Error("MFPGRID: bad dimensions");
  }
  const payload = bytes.length - newline - 1;
  if (payload !== width * height * 4) {
    throw new Error(`MFPGRID: expected ${width * height * 4} payload bytes, got ${payload}`);
  }
  const view = new DataView(buffer, newline + 1);
  const values = new Float32Array(width * height);
  for (let i = 0; i < values.length; i++) {
    values[i] = view.getFloat32(i * 4, true);
  }
  return { width, height, values };
}

export function decodeGridBase64(b64: string): Grid {
  return decodeGrid(base64ToBytes(b64).buffer as ArrayBuffer);
}

export function base64ToBytes(b64: string): Uint8Array {
  if (typeof atob === "function") {
    const raw = atob(b64);
    const out = new Uint8Array(raw.length);
    for (let i = 0; i < raw.length; i++) {
      out[i] = raw.charCodeAt(i);
    }
    return out;
  }
  // node (tests) — typed via globalThis so the browser build needs no node types
  const nodeBuffer = (globalThis as { Buffer?: { from(s: string, enc: string): Uint8Array } }).Buffer;
  if (!nodeBuffer) {
    throw new Error("no base64 decoder available");
  }
  return new Uint8Array(nodeBuffer.from(b64, "base64"));
}

/** Row-major indices where two same-size grids differ. */
export function gridDiffIndices(a: Grid, b: Grid): number[] {
  if (a.width !== b.width || a.height !== b.height) {
    throw new Error("grid dimensions differ");
  }
  const out: number[] = [];
  for (let i = 0; i < a.values.length; i++) {
    if (a.values[i] !== b.values[i]) {
      out.push(i);
    }
  }
  return out;
}
