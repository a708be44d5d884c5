/**
 * Client-side view state for one annotation session.
 *
 * Invariants:
 *  - markers mirror the server history exactly after every response;
 *  - at most one request is in flight per session, further user actions
 *    queue client-side and run in order;
 *  - a failed request leaves the state unchanged (the error is surfaced
 *    through onError).
 */

import { ApiClient, ClickLabel, ClickResponse, SessionState } from "./api";

export type LayerName = "image" | "mask" | "p" | "p_mod";

export interface Marker {
  row: number;
  col: number;
  label: ClickLabel;
  index: number;
}

export interface ViewState {
  sessionId: string | null;
  width: number;
  height: number;
  gtAvailable: boolean;
  layer: LayerName;
  markers: Marker[];
  iou: number | null;
  lastClick: ClickResponse | null;
}

export class SessionStore {
  readonly state: ViewState = {
    sessionId: null,
    width: 0,
    height: 0,
    gtAvailable: false,
    layer: "image",
    markers: [],
    iou: null,
    lastClick: null,
  };

  private queue: (() => Promise<void>)[] = [];
  private inFlight = false;

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (state: ViewState) => void = () => {},
    private readonly onError: (error: unknown) => void = () => {},
  ) {}

  async createSession(body: {
    image_png_b64?: string;
    mask_png_b64?: string;
    dataset?: string;
    sample?: string;
  }): Promise<void> {
    const created = await this.api.createSession(body);
    this.state.sessionId = created.id;
    this.state.width = created.width;
    this.state.height = created.height;
    this.state.gtAvailable = created.gt_available;
    this.state.layer = "image";
    this.state.markers = [];
    this.state.iou = null;
    this.state.lastClick = null;
    this.onChange(this.state);
  }

  /** Left button sends foreground, right button background. */
  placeClick(row: number, col: number, label: ClickLabel): Promise<void> {
    return this.enqueue(async () => {
      const sid = this.requireSession();
      const resp = await this.api.addClick(sid, row, col, label);
      this.state.markers.push({ row, col, label, index: resp.round });
      this.state.iou = resp.iou ?? null;
      this.state.lastClick = resp;
      this.onChange(this.state);
    });
  }

  undoLast(): Promise<void> {
    return this.enqueue(async () => {
      const sid = this.requireSession();
      const state = await this.api.undo(sid);
      this.applyServerState(state);
    });
  }

  reset(): Promise<void> {
    return this.enqueue(async () => {
      const sid = this.requireSession();
      const state = await this.api.reset(sid);
      this.applyServerState(state);
    });
  }

  canUndo(): boolean {
    return this.state.markers.length > 0;
  }

  /** Switch the displayed layer; refused when the layer has no data yet. */
  toggleLayer(layer: LayerName): boolean {
    if (layer !== "image" && this.state.lastClick === null) {
      return false;
    }
    this.state.layer = layer;
    this.onChange(this.state);
    return true;
  }

  /** Resolves when every queued action has settled. */
  async idle(): Promise<void> {
    while (this.inFlight || this.queue.length > 0) {
      await new Promise((resolve) => setTimeout(resolve, 0));
    }
  }

  private applyServerState(state: SessionState): void {
    this.state.markers = state.clicks.map((c) => ({
      row: c.row,
      col: c.col,
      label: c.label,
      index: c.index,
    }));
    if (state.round === 0) {
      this.state.lastClick = null;
      this.state.iou = null;
      this.state.layer = "image";
    }
    this.onChange(this.state);
  }

  private requireSession(): string {
    if (this.state.sessionId === null) {
      throw new Error("no active session");
    }
    return this.state.sessionId;
  }

  private enqueue(action: () => Promise<void>): Promise<void> {
    return new Promise((resolve) => {
      this.queue.push(async () => {
        try {
          await action();
        } catch (error) {
          this.onError(error); // non-blocking: state unchanged
        }
        resolve();
      });
      void this.pump();
    });
  }

  private async pump(): Promise<void> {
    if (this.inFlight) {
      return;
    }
    const next = this.queue.shift();
    if (!next) {
      return;
    }
    this.inFlight = true;
    try {
      await next();
    } finally {
      this.inFlight = false;
      void this.pump();
    }
  }
}
