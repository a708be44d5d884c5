/**
 * Typed client for the session service HTTP+JSON API. The transport is
 * injectable so tests can replay recorded wire bodies.
 */

export type ClickLabel = "foreground" | "background";

export interface CreateSessionResponse {
  id: string;
  width: number;
  height: number;
  gt_available: boolean;
}

export interface ClickResponse {
  round: number;
  mask_png_b64: string;
  p_grid_b64: string;
  p_prev_grid_b64: string;
  p_mod_grid_b64: string;
  modulation_window: { row: number; col: number; radius: number };
  iou?: number;
}

export interface SessionState {
  id: string;
  round: number;
  width: number;
  height: number;
  gt_available: boolean;
  clicks: { row: number; col: number; label: ClickLabel; index: number }[];
}

export interface Transport {
  request(method: string, path: string, body?: unknown): Promise<unknown>;
}

export class HttpError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export function fetchTransport(baseUrl: string): Transport {
  return {
    async request(method, path, body) {
      const resp = await fetch(baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
      if (!resp.ok) {
        let detail = resp.statusText;
        try {
          detail = ((await resp.json()) as { detail?: string }).detail ?? detail;
        } catch {
          /* non-JSON error body */
        }
        throw new HttpError(resp.status, detail);
      }
      return resp.json();
    },
  };
}

export class ApiClient {
  constructor(private readonly transport: Transport) {}

  createSession(body: {
    image_png_b64?: string;
    mask_png_b64?: string;
    dataset?: string;
    sample?: string;
  }): Promise<CreateSessionResponse> {
    return this.transport.request("POST", "/sessions", body) as Promise<CreateSessionResponse>;
  }

  addClick(sessionId: string, row: number, col: number, label: ClickLabel): Promise<ClickResponse> {
    return this.transport.request("POST", `/sessions/${sessionId}/clicks`, {
      row,
      col,
      label,
    }) as Promise<ClickResponse>;
  }

  undo(sessionId: string): Promise<SessionState> {
    return this.transport.request("POST", `/sessions/${sessionId}/undo`) as Promise<SessionState>;
  }

  reset(sessionId: string): Promise<SessionState> {
    return this.transport.request("POST", `/sessions/${sessionId}/reset`) as Promise<SessionState>;
  }

  getState(sessionId: string): Promise<SessionState> {
    return this.transport.request("GET", `/sessions/${sessionId}`) as Promise<SessionState>;
  }

  listDatasets(): Promise<{ datasets: string[] }> {
    return this.transport.request("GET", "/datasets") as Promise<{ datasets: string[] }>;
  }
}
