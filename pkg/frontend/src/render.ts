/** DOM builders for chat bubbles, context cards, and the trace panel. */

import { ContextCard, TracePayload } from "./api.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function userBubble(text: string): HTMLElement {
  const bubble = el("div", "bubble user");
  bubble.appendChild(el("p", "bubble-text", text));
  return bubble;
}

export function contextPanel(cards: ContextCard[]): HTMLElement {
  const details = el("details", "context-panel");
  details.appendChild(el("summary", "", `context (${cards.length})`));
  for (const card of cards) {
    const node = el("div", "context-card");
    node.dataset.itemId = card.id;
    node.appendChild(el("div", "card-head", card.title ? `${card.title} — ${card.id}` : card.id));
    node.appendChild(el("div", "card-score", `score ${card.score.toFixed(4)}`));
    node.appendChild(el("pre", "card-text", card.text));
    details.appendChild(node);
  }
  return details;
}

export function assistantBubble(
  answer: string,
  cards: ContextCard[],
  traceId: string,
  onInspect: (traceId: string) => void,
): HTMLElement {
  const bubble = el("div", "bubble assistant");
  bubble.appendChild(el("p", "bubble-text", answer));
  bubble.appendChild(contextPanel(cards));
  const inspect = el("a", "inspect-link", "why this answer?");
  inspect.href = "#";
  inspect.dataset.traceId = traceId;
  inspect.addEventListener("click", (event) => {
    event.preventDefault();
    onInspect(traceId);
  });
  bubble.appendChild(inspect);
  return bubble;
}

export function errorBubble(message: string, onRetry: () => void): HTMLElement {
  const bubble = el("div", "bubble assistant error");
  bubble.appendChild(el("p", "bubble-text", message));
  const retry = el("button", "retry-button", "retry");
  retry.addEventListener("click", onRetry);
  bubble.appendChild(retry);
  return bubble;
}

/** Answers are buffered, not streamed; show elapsed seconds while waiting. */
export function spinnerBubble(now: () => number = () => Date.now()): {
  element: HTMLElement;
  stop: () => void;
} {
  const bubble = el("div", "bubble assistant spinner");
  const label = el("span", "spinner-label", "thinking… 0s");
  bubble.appendChild(label);
  const started = now();
  const timer = setInterval(() => {
    label.textContent = `thinking… ${Math.round((now() - started) / 1000)}s`;
  }, 1000);
  return {
    element: bubble,
    stop: () => clearInterval(timer),
  };
}

function timingsBars(timings: Record<string, number>): HTMLElement {
  const wrap = el("div", "timings");
  const steps = ["rewrite", "retrieve", "prompt", "generate"];
  const max = Math.max(...steps.map((s) => timings[s] ?? 0), 1e-9);
  for (const step of steps) {
    const value = timings[step] ?? 0;
    const row = el("div", "timing-row");
    row.dataset.step = step;
    row.appendChild(el("span", "timing-label", step));
    const bar = el("div", "timing-bar");
    bar.style.width = `${Math.max(1, Math.round((value / max) * 100))}%`;
    row.appendChild(bar);
    row.appendChild(el("span", "timing-value", `${value.toFixed(3)}s`));
    wrap.appendChild(row);
  }
  return wrap;
}

export function tracePanel(trace: TracePayload): HTMLElement {
  const panel = el("div", "trace-panel-body");
  panel.appendChild(el("h3", "", "answer trace"));

  const queries = el("div", "trace-queries");
  queries.appendChild(el("div", "trace-original", `original: ${trace.original_query}`));
  queries.appendChild(el("div", "trace-rewritten", `rewritten: ${trace.rewritten_query}`));
  if (!trace.was_rewritten) {
    queries.appendChild(el("span", "badge verbatim", "query used verbatim"));
  }
  panel.appendChild(queries);

  panel.appendChild(el("div", "trace-retriever", `retriever: ${trace.retriever}`));

  const items = el("div", "trace-items");
  for (const item of trace.context) {
    const card = el("div", "context-card");
    card.dataset.itemId = item.id;
    const chunk = item.chunk_count > 1 ? ` (part ${item.chunk_index + 1} of ${item.chunk_count})` : "";
    card.appendChild(el("div", "card-head", `#${item.rank} ${item.title || item.id}${chunk}`));
    card.appendChild(el("div", "card-score", `score ${item.score.toFixed(4)} [${item.source_kind}]`));
    card.appendChild(el("pre", "card-text", item.text));
    items.appendChild(card);
  }
  panel.appendChild(items);
  if (trace.dropped_below_threshold > 0) {
    panel.appendChild(
      el("div", "trace-dropped", `${trace.dropped_below_threshold} item(s) dropped below the similarity threshold`),
    );
  }
  panel.appendChild(timingsBars(trace.step_timings));
  return panel;
}

export function traceExpiredNotice(): HTMLElement {
  return el("div", "trace-panel-body trace-expired", "trace expired");
}
