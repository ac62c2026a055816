// REST client for the voxgram server. Thin and state-free: every call
// returns the server payload untouched, so callers can treat responses as
// the authoritative production state.

import type {
  ApplyPayload,
  ChoicesPayload,
  EnclosurePayload,
  GrammarDoc,
  ModelDoc,
  SessionPayload,
  SnapshotPayload,
} from "./types";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface InferRequest {
  model: ModelDoc;
  spec?: "rect" | "2d" | "3d";
  alpha?: number;
  ops?: "merge" | "split" | "both";
  overlap?: boolean;
  plateau?: boolean;
}

export interface GenerateRequest {
  grammar: GrammarDoc;
  seed?: number;
  max_steps?: number;
  enclosure?: boolean;
  initial?: number;
}

export interface GeneratePayload extends SnapshotPayload {
  seed: number;
  removed: number;
  model: ModelDoc;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "/api",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const text = await resp.text();
    let payload: unknown = null;
    if (text) {
      try {
        payload = JSON.parse(text);
      } catch {
        throw new ApiError(resp.status, `unparseable response: ${text.slice(0, 120)}`);
      }
    }
    if (!resp.ok) {
      const detail =
        payload && typeof payload === "object" && "detail" in payload
          ? String((payload as { detail: unknown }).detail)
          : resp.statusText;
      throw new ApiError(resp.status, detail);
    }
    return payload as T;
  }

  createSession(grammar: GrammarDoc, opts: { initial?: number; seed?: number } = {}) {
    return this.request<SessionPayload>("POST", "/sessions", { grammar, ...opts });
  }

  getSession(id: string) {
    return this.request<SessionPayload & { grammar: GrammarDoc }>("GET", `/sessions/${id}`);
  }

  getChoices(id: string) {
    return this.request<ChoicesPayload>("GET", `/sessions/${id}/choices`);
  }

  applyChoice(id: string, choice: number) {
    return this.request<ApplyPayload>("POST", `/sessions/${id}/apply`, { choice });
  }

  undo(id: string) {
    return this.request<SnapshotPayload>("POST", `/sessions/${id}/undo`);
  }

  enclosure(id: string) {
    return this.request<EnclosurePayload>("POST", `/sessions/${id}/enclosure`);
  }

  getModel(id: string) {
    return this.request<ModelDoc>("GET", `/sessions/${id}/model`);
  }

  listCorpus() {
    return this.request<{ models: string[] }>("GET", "/corpus");
  }

  getCorpusModel(name: string) {
    return this.request<ModelDoc>("GET", `/corpus/${name}`);
  }

  infer(req: InferRequest) {
    return this.request<Record<string, unknown>>("POST", "/infer", req);
  }

  induce(sets: Record<string, unknown>[], initial?: number) {
    return this.request<GrammarDoc>("POST", "/induce", { sets, initial });
  }

  generate(req: GenerateRequest) {
    return this.request<GeneratePayload>("POST", "/generate", req);
  }
}
