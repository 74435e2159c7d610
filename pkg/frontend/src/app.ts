/** Chat application wiring: composer, message list, trace inspector. */

import { ApiClient, ApiError } from "./api.js";
import {
  assistantBubble,
  el,
  errorBubble,
  spinnerBubble,
  tracePanel,
  traceExpiredNotice,
  userBubble,
} from "./render.js";
import { UiSession } from "./session.js";

const RETRIEVERS = ["ensemble", "bm25", "tfidf", "embedding"];

export class ChatApp {
  readonly messages: HTMLElement;
  readonly input: HTMLInputElement;
  readonly sendButton: HTMLButtonElement;
  readonly retrieverSelect: HTMLSelectElement;
  readonly tracePane: HTMLElement;
  session!: UiSession;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {
    this.messages = el("div", "messages");

    this.input = el("input", "composer-input");
    this.input.type = "text";
    this.input.placeholder = "Ask about builds, releases, clusters…";

    this.retrieverSelect = el("select", "retriever-select");
    for (const kind of RETRIEVERS) {
      const option = el("option", "", kind);
      option.value = kind;
      this.retrieverSelect.appendChild(option);
    }

    this.sendButton = el("button", "send-button", "send");
    this.sendButton.disabled = true;

    const composer = el("div", "composer");
    composer.append(this.input, this.retrieverSelect, this.sendButton);

    this.tracePane = el("aside", "trace-pane");
    this.tracePane.hidden = true;

    root.replaceChildren(this.messages, composer, this.tracePane);

    this.input.addEventListener("input", () => this.refreshControls());
    this.input.addEventListener("keydown", (event) => {
      if (event.key === "Enter" && !this.sendButton.disabled) void this.handleSend();
    });
    this.sendButton.addEventListener("click", () => void this.handleSend());
  }

  async start(): Promise<void> {
    this.session = new UiSession(await this.api.createSession(), this.api);
    this.refreshControls();
  }

  refreshControls(): void {
    const blocked = !this.session || !this.session.canSend(this.input.value);
    this.sendButton.disabled = blocked;
    this.input.classList.toggle("pending", this.session?.pending ?? false);
  }

  async handleSend(text?: string, retriever?: string): Promise<void> {
    const messageText = (text ?? this.input.value).trim();
    const kind = retriever ?? this.retrieverSelect.value;
    if (!this.session || !this.session.canSend(messageText)) return;

    this.messages.appendChild(userBubble(messageText));
    const spinner = spinnerBubble();
    this.messages.appendChild(spinner.element);
    this.input.value = "";
    this.refreshControls();

    const result = await this.session.send(messageText, kind);
    spinner.stop();
    spinner.element.remove();

    if (result.kind === "ok") {
      this.messages.appendChild(
        assistantBubble(
          result.response.answer,
          result.response.context,
          result.response.trace_id,
          (traceId) => void this.showTrace(traceId),
        ),
      );
    } else if (result.kind === "error") {
      const { error } = result;
      const label = error.retryable ? error.message : `error: ${error.message}`;
      this.messages.appendChild(errorBubble(label, () => void this.handleSend(messageText, kind)));
    }
    this.refreshControls();
  }

  async showTrace(traceId: string): Promise<void> {
    this.tracePane.hidden = false;
    try {
      const trace = await this.api.getTrace(traceId);
      this.tracePane.replaceChildren(tracePanel(trace));
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.tracePane.replaceChildren(traceExpiredNotice());
        return;
      }
      throw err;
    }
  }
}

export async function mountChatApp(root: HTMLElement, api = new ApiClient()): Promise<ChatApp> {
  const app = new ChatApp(root, api);
  await app.start();
  return app;
}
