"""The full conversational turn: rewrite, retrieve, prompt, generate."""

import time
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone

from corpusqa.corpus.embedding import Embedder
from corpusqa.corpus.store import VectorStore
from corpusqa.dialogue.llm import LlmClient
from corpusqa.dialogue.prompts import build_answer_prompt
from corpusqa.dialogue.rewrite import RewriteOutcome, rewrite_query
from corpusqa.dialogue.session import ChatSession
from corpusqa.errors import GenerationError, TransportError, ProtocolError
from corpusqa.retrieval.pipeline import RetrievalConfig, RetrievalResult, RetrieverKind, retrieve

DEFAULT_FALLBACK_ANSWER = (
    "I do not have enough information to answer that question."
)
GENERATION_ERROR_NOTICE = (
    "Sorry, I could not generate an answer because the language model is unreachable. "
    "Please try again."
)


@dataclass
class AnswerTrace:
    """Everything needed to explain one answered turn."""

    trace_id: str
    original_query: str
    rewrite: RewriteOutcome
    retrieval: RetrievalResult
    final_prompt: str
    answer: str
    step_timings: dict[str, float]  # rewrite | retrieve | prompt | generate
    generation_failed: bool = False
    created_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))


def generate_answer(prompt: str, llm: LlmClient, fallback: str = DEFAULT_FALLBACK_ANSWER) -> str:
    """Single completion call; an empty response maps to the fallback text."""
    if not prompt:
        raise ValueError("prompt must be non-empty")
    try:
        text = llm.complete(prompt)
    except (TransportError, ProtocolError) as exc:
        raise GenerationError(str(exc)) from exc
    text = text.strip()
    return text if text else fallback


def chat_turn(
    session: ChatSession,
    user_query: str,
    kind: RetrieverKind,
    store: VectorStore,
    cfg: RetrievalConfig,
    embedder: Embedder,
    llm: LlmClient,
    rewrite_llm: LlmClient | None = None,
) -> AnswerTrace:
    """Run one turn and append it to the session.

    Rewriting fails open (the original query is used); generation failure is
    recorded in the trace and as an assistant error notice rather than lost,
    so the caller still gets the full trace and can surface the failure.
    """
    if not user_query or not user_query.strip():
        raise ValueError("user query must be non-empty")

    with session.lock:
        timings: dict[str, float] = {}

        t = time.perf_counter()
        rewrite = rewrite_query(session, user_query, rewrite_llm or llm)
        timings["rewrite"] = time.perf_counter() - t

        t = time.perf_counter()
        retrieval = retrieve(rewrite.enhanced_query, kind, store, cfg, embedder, llm)
        timings["retrieve"] = time.perf_counter() - t

        t = time.perf_counter()
        prompt = build_answer_prompt(
            rewrite.enhanced_query, retrieval.selected, dialect=getattr(llm, "dialect", "plain")
        )
        timings["prompt"] = time.perf_counter() - t

        t = time.perf_counter()
        generation_failed = False
        try:
            answer = generate_answer(prompt, llm)
        except GenerationError:
            answer = GENERATION_ERROR_NOTICE
            generation_failed = True
        timings["generate"] = time.perf_counter() - t

        trace = AnswerTrace(
            trace_id=uuid.uuid4().hex,
            original_query=user_query,
            rewrite=rewrite,
            retrieval=retrieval,
            final_prompt=prompt,
            answer=answer,
            step_timings=timings,
            generation_failed=generation_failed,
        )
        session.append("user", user_query, trace.trace_id)
        session.append("assistant", answer, trace.trace_id)
        return trace
