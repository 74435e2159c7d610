/** A tiny mocked API server behind the fetch interface. */

import { ApiClient, MessageResponse, TracePayload } from "../src/api.js";

export interface MockRoute {
  status: number;
  body: unknown;
}

export type Router = (url: string, init?: RequestInit) => MockRoute | Promise<MockRoute>;

export function mockApi(router: Router): { api: ApiClient; calls: { url: string; init?: RequestInit }[] } {
  const calls: { url: string; init?: RequestInit }[] = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    const route = await router(url, init);
    return new Response(JSON.stringify(route.body), {
      status: route.status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { api: new ApiClient("", fetchFn), calls };
}

export const CANNED_ANSWER: MessageResponse = {
  answer: "Open the pool settings and register the channel under build triggers.",
  trace_id: "tr-0001",
  rewritten_query: "How do I add a test channel to a Jenkins pool?",
  was_rewritten: true,
  context: [
    { id: "m9:0", score: 0.91, text: "Message: the canonical answer thread", title: "" },
    { id: "p2:1", score: 0.41, text: "Page Title: Pools (part 2 of 3)\nmore detail", title: "Pools" },
    { id: "m5:0", score: 0.88, text: "Message: a related thread", title: "" },
  ],
  timings: { rewrite: 1.21, retrieve: 0.012, prompt: 0.002, generate: 9.4 },
};

export const CANNED_TRACE: TracePayload = {
  trace_id: "tr-0001",
  original_query: "what about the second one?",
  rewritten_query: "How do I migrate from cluster one to cluster two?",
  was_rewritten: true,
  retriever: "ensemble",
  context: [
    {
      id: "m9:0",
      score: 0.91,
      rank: 1,
      title: "",
      text: "Message: the canonical answer thread",
      source_kind: "teams",
      chunk_index: 0,
      chunk_count: 1,
      per_retriever: { bm25: 1.0, embedding: 0.82, ensemble: 0.91 },
    },
    {
      id: "p2:1",
      score: 0.41,
      rank: 3,
      title: "Pools",
      text: "Page Title: Pools (part 2 of 3)\nmore detail",
      source_kind: "confluence",
      chunk_index: 1,
      chunk_count: 3,
      per_retriever: { bm25: 0.2, embedding: 0.62, ensemble: 0.41 },
    },
    {
      id: "m5:0",
      score: 0.88,
      rank: 2,
      title: "",
      text: "Message: a related thread",
      source_kind: "teams",
      chunk_index: 0,
      chunk_count: 1,
      per_retriever: { bm25: 0.9, embedding: 0.86, ensemble: 0.88 },
    },
  ],
  dropped_below_threshold: 0,
  answer: "Use the migration runbook.",
  step_timings: { rewrite: 1.5, retrieve: 0.004, prompt: 0.001, generate: 41.2 },
  generation_failed: false,
};

export function sessionRoute(): MockRoute {
  return { status: 200, body: { session_id: "sess-1" } };
}
