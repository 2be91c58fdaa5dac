/** Thin typed client for the session service. */

import type {
  JobPayload,
  JobResponse,
  NeighborsDto,
  Preset,
  SessionInfo,
} from "./types.js";

export class ApiError extends Error {
  status: number;
  missing: string[];

  constructor(status: number, message: string, missing: string[] = []) {
    super(message);
    this.status = status;
    this.missing = missing;
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let message = `${resp.status} ${resp.statusText}`;
  let missing: string[] = [];
  try {
    const body = await resp.json();
    const detail = body?.detail;
    if (typeof detail === "string") {
      message = detail;
    } else if (detail && typeof detail === "object") {
      message = detail.message ?? JSON.stringify(detail);
      if (Array.isArray(detail.missing)) missing = detail.missing;
    }
  } catch {
    /* non-JSON body: keep the status text */
  }
  return new ApiError(resp.status, message, missing);
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  createSession(embedding: string): Promise<SessionInfo> {
    return this.request("POST", "/sessions", { embedding });
  }

  uploadSession(format: string, content: string): Promise<SessionInfo> {
    return this.request("POST", "/sessions", { upload: { format, content } });
  }

  runJob(sessionId: string, job: JobPayload): Promise<JobResponse> {
    return this.request("POST", `/sessions/${sessionId}/jobs`, job);
  }

  neighbors(
    sessionId: string,
    token: string,
    k: number,
    state: "before" | "after",
  ): Promise<NeighborsDto> {
    const q = new URLSearchParams({ token, k: String(k), state });
    return this.request("GET", `/sessions/${sessionId}/neighbors?${q}`);
  }

  reset(sessionId: string): Promise<{ session_id: string; snapshot_id: string }> {
    return this.request("POST", `/sessions/${sessionId}/reset`);
  }

  presets(): Promise<{ presets: Preset[] }> {
    return this.request("GET", "/presets");
  }

  embeddings(): Promise<{ embeddings: string[] }> {
    return this.request("GET", "/embeddings");
  }

  /** Raw export body; the caller turns it into a download. */
  async exportText(sessionId: string, format: string): Promise<string> {
    const resp = await fetch(
      `${this.baseUrl}/sessions/${sessionId}/export?format=${encodeURIComponent(format)}`,
    );
    if (!resp.ok) throw await parseError(resp);
    return resp.text();
  }
}
