/** Typed client for the corpusqa HTTP API. */

export interface ContextCard {
  id: string;
  score: number;
  text: string;
  title: string;
}

export interface MessageResponse {
  answer: string;
  trace_id: string;
  rewritten_query: string;
  was_rewritten: boolean;
  context: ContextCard[];
  timings: Record<string, number>;
}

export interface TraceContextItem {
  id: string;
  score: number;
  rank: number;
  title: string;
  text: string;
  source_kind: string;
  chunk_index: number;
  chunk_count: number;
  per_retriever: Record<string, number>;
}

export interface TracePayload {
  trace_id: string;
  original_query: string;
  rewritten_query: string;
  was_rewritten: boolean;
  retriever: string;
  context: TraceContextItem[];
  dropped_below_threshold: number;
  answer: string;
  step_timings: Record<string, number>;
  generation_failed: boolean;
}

export interface HealthPayload {
  status: string;
  store_generation: string;
  item_count: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly traceId?: string,
  ) {
    super(message);
  }

  get retryable(): boolean {
    return this.status === 409 || this.status === 503;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(
        response.status,
        body.code ?? "unknown",
        body.error ?? `request failed with status ${response.status}`,
        body.trace_id,
      );
    }
    return body as T;
  }

  async createSession(): Promise<string> {
    const body = await this.request<{ session_id: string }>("/api/sessions", { method: "POST" });
    return body.session_id;
  }

  sendMessage(sessionId: string, text: string, retriever?: string): Promise<MessageResponse> {
    return this.request<MessageResponse>(`/api/sessions/${sessionId}/messages`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(retriever ? { text, retriever } : { text }),
    });
  }

  getTrace(traceId: string): Promise<TracePayload> {
    return this.request<TracePayload>(`/api/traces/${traceId}`);
  }

  health(): Promise<HealthPayload> {
    return this.request<HealthPayload>("/api/health");
  }
}
