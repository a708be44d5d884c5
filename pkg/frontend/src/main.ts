/**
 * Browser entry point: canvas wiring for the click UI.
 *
 * Left click places a foreground click (green marker), right click a
 * background click (red marker, context menu suppressed). Layer buttons
 * switch between the image, the mask overlay, and the raw / modulated
 * probability heatmaps; both heatmaps share one color map so they are
 * visually comparable.
 */

import { ApiClient, fetchTransport } from "./api";
import { decodeGridBase64, base64ToBytes } from "./grid";
import { heatmapPixels, maskOverlayPixels } from "./render";
import { LayerName, SessionStore, ViewState } from "./session-store";

const SCALE = 8;

const canvas = document.getElementById("view") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const fileInput = document.getElementById("file") as HTMLInputElement;
const maskInput = document.getElementById("gt-file") as HTMLInputElement;
const undoButton = document.getElementById("undo") as HTMLButtonElement;
const resetButton = document.getElementById("reset") as HTMLButtonElement;
const iouLabel = document.getElementById("iou") as HTMLSpanElement;
const toast = document.getElementById("toast") as HTMLDivElement;

const api = new ApiClient(fetchTransport(""));
const store = new SessionStore(api, render, showError);

let imagePixels: Uint8ClampedArray | null = null;
let imageWidth = 0;
let imageHeight = 0;

function showError(error: unknown): void {
  toast.textContent = String(error);
  toast.classList.add("visible");
  setTimeout(() => toast.classList.remove("visible"), 3000);
}

async function fileToBase64(file: File): Promise<string> {
  const buf = await file.arrayBuffer();
  let binary = "";
  for (const byte of new Uint8Array(buf)) {
    binary += String.fromCharCode(byte);
  }
  return btoa(binary);
}

async function pngToPixels(b64: string): Promise<{ data: Uint8ClampedArray; width: number; height: number }> {
  const blob = new Blob([base64ToBytes(b64).slice().buffer as ArrayBuffer], { type: "image/png" });
  const bitmap = await createImageBitmap(blob);
  const off = document.createElement("canvas");
  off.width = bitmap.width;
  off.height = bitmap.height;
  const offCtx = off.getContext("2d")!;
  offCtx.drawImage(bitmap, 0, 0);
  const data = offCtx.getImageData(0, 0, bitmap.width, bitmap.height);
  return { data: data.data, width: bitmap.width, height: bitmap.height };
}

async function startSession(): Promise<void> {
  const file = fileInput.files?.[0];
  if (!file) {
    return;
  }
  const body: { image_png_b64: string; mask_png_b64?: string } = {
    image_png_b64: await fileToBase64(file),
  };
  const gtFile = maskInput.files?.[0];
  if (gtFile) {
    body.mask_png_b64 = await fileToBase64(gtFile);
  }
  try {
    await store.createSession(body);
  } catch (error) {
    showError(error);
    return;
  }
  const decoded = await pngToPixels(body.image_png_b64);
  imagePixels = decoded.data;
  imageWidth = decoded.width;
  imageHeight = decoded.height;
  canvas.width = imageWidth * SCALE;
  canvas.height = imageHeight * SCALE;
  render(store.state);
}

async function layerPixels(state: ViewState): Promise<Uint8ClampedArray | null> {
  if (!imagePixels) {
    return null;
  }
  const last = state.lastClick;
  switch (state.layer) {
    case "image":
      return imagePixels;
    case "mask": {
      if (!last) {
        return imagePixels;
      }
      const mask = await pngToPixels(last.mask_png_b64);
      const binary = new Uint8Array(imageWidth * imageHeight);
      for (let i = 0; i < binary.length; i++) {
        binary[i] = mask.data[i * 4] !== 0 ? 1 : 0;
      }
      return maskOverlayPixels(imagePixels, binary);
    }
    case "p":
      return last ? heatmapPixels(decodeGridBase64(last.p_grid_b64)) : null;
    case "p_mod":
      return last ? heatmapPixels(decodeGridBase64(last.p_mod_grid_b64)) : null;
  }
}

function drawMarkers(state: ViewState): void {
  for (const marker of state.markers) {
    ctx.fillStyle = marker.label === "foreground" ? "#00c853" : "#d50000";
    ctx.beginPath();
    ctx.arc((marker.col + 0.5) * SCALE, (marker.row + 0.5) * SCALE, SCALE * 0.45, 0, 2 * Math.PI);
    ctx.fill();
    ctx.strokeStyle = "#ffffff";
    ctx.stroke();
  }
}

function render(state: ViewState): void {
  undoButton.disabled = !store.canUndo();
  iouLabel.textContent = state.iou === null ? "—" : (state.iou * 100).toFixed(1) + "%";
  void layerPixels(state).then((pixels) => {
    if (!pixels) {
      return;
    }
    const image = new ImageData(new Uint8ClampedArray(pixels), imageWidth, imageHeight);
    const off = document.createElement("canvas");
    off.width = imageWidth;
    off.height = imageHeight;
    off.getContext("2d")!.putImageData(image, 0, 0);
    ctx.imageSmoothingEnabled = false;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
    drawMarkers(state);
  });
}

canvas.addEventListener("mousedown", (event) => {
  if (!store.state.sessionId) {
    return;
  }
  const rect = canvas.getBoundingClientRect();
  const col = Math.floor(((event.clientX - rect.left) / rect.width) * imageWidth);
  const row = Math.floor(((event.clientY - rect.top) / rect.height) * imageHeight);
  const label = event.button === 2 ? "background" : "foreground";
  void store.placeClick(row, col, label);
});
canvas.addEventListener("contextmenu", (event) => event.preventDefault());

for (const layer of ["image", "mask", "p", "p_mod"] as LayerName[]) {
  document.getElementById(`layer-${layer}`)?.addEventListener("click", () => {
    if (!store.toggleLayer(layer)) {
      showError("layer has no data yet");
    }
  });
}

undoButton.addEventListener("click", () => void store.undoLast());
resetButton.addEventListener("click", () => void store.reset());
fileInput.addEventListener("change", () => void startSession());
maskInput.addEventListener("change", () => void startSession());
