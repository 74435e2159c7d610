/** Client-side session state. At most one request is ever in flight. */

import { ApiClient, ApiError, MessageResponse } from "./api.js";

export interface UiTurn {
  role: "user" | "assistant";
  text: string;
  traceId?: string;
  context?: MessageResponse["context"];
  error?: ApiError;
}

export type SendResult =
  | { kind: "ok"; response: MessageResponse }
  | { kind: "error"; error: ApiError }
  | { kind: "blocked" };

export class UiSession {
  turns: UiTurn[] = [];
  pending = false;

  constructor(
    readonly sessionId: string,
    private readonly api: ApiClient,
  ) {}

  canSend(text: string): boolean {
    return !this.pending && text.trim().length > 0;
  }

  /** Send one message; overlapping sends are refused client-side. */
  async send(text: string, retriever?: string): Promise<SendResult> {
    if (!this.canSend(text)) {
      return { kind: "blocked" };
    }
    this.pending = true;
    this.turns.push({ role: "user", text });
    try {
      const response = await this.api.sendMessage(this.sessionId, text.trim(), retriever);
      this.turns.push({
        role: "assistant",
        text: response.answer,
        traceId: response.trace_id,
        context: response.context,
      });
      return { kind: "ok", response };
    } catch (err) {
      if (err instanceof ApiError) {
        this.turns.push({ role: "assistant", text: err.message, error: err });
        return { kind: "error", error: err };
      }
      throw err;
    } finally {
      this.pending = false;
    }
  }
}
