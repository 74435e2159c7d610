"""HTTP API over the chat pipeline.

Sessions live in memory with TTL eviction. A session processes one message
at a time (concurrent sends get 409); distinct sessions run in parallel.
Store generations swap atomically under the handle, so reloads never break
requests already in flight.
"""

import json
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from corpusqa.corpus.embedding import Embedder
from corpusqa.corpus.store import StoreHandle, load_current
from corpusqa.dialogue.chat import AnswerTrace, chat_turn
from corpusqa.dialogue.llm import LlmClient
from corpusqa.dialogue.session import ChatSession
from corpusqa.errors import CorpusQaError
from corpusqa.evalharness.report import render_report
from corpusqa.evalharness.groundtruth import load_ground_truth
from corpusqa.evalharness.runner import run_eval
from corpusqa.retrieval.pipeline import RetrieverKind
from corpusqa.service.config import AppConfig


@dataclass
class _SessionEntry:
    session: ChatSession
    last_access: float


@dataclass
class _EvalJob:
    id: str
    kinds: list[str]
    iterations: int
    status: str = "queued"  # queued | running | done | failed
    report_json: bytes | None = None
    error: str = ""


@dataclass
class AppState:
    config: AppConfig
    store_handle: StoreHandle
    embedder: Embedder
    llm: LlmClient
    rewrite_llm: LlmClient | None = None
    sessions: dict[str, _SessionEntry] = field(default_factory=dict)
    traces: dict[str, AnswerTrace] = field(default_factory=dict)
    jobs: dict[str, _EvalJob] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)
    _worker: threading.Thread | None = None
    _queue: list[str] = field(default_factory=list)
    _queue_ready: threading.Condition = field(default_factory=threading.Condition)

    def evict_expired(self) -> None:
        ttl = self.config.server.session_ttl_seconds
        cutoff = time.monotonic() - ttl
        with self.lock:
            expired = [sid for sid, e in self.sessions.items() if e.last_access < cutoff]
            for sid in expired:
                del self.sessions[sid]

    def enqueue_eval(self, kinds: list[str], iterations: int) -> _EvalJob:
        job = _EvalJob(id=uuid.uuid4().hex, kinds=kinds, iterations=iterations)
        with self.lock:
            self.jobs[job.id] = job
        with self._queue_ready:
            self._queue.append(job.id)
            if self._worker is None:
                self._worker = threading.Thread(target=self._run_jobs, daemon=True)
                self._worker.start()
            self._queue_ready.notify()
        return job

    def _run_jobs(self) -> None:
        # One eval at a time; jobs are processed in arrival order.
        while True:
            with self._queue_ready:
                while not self._queue:
                    self._queue_ready.wait()
                job_id = self._queue.pop(0)
            job = self.jobs[job_id]
            job.status = "running"
            try:
                entries = load_ground_truth(self.config.eval.ground_truth)
                store, _ = self.store_handle.get()
                report, records = run_eval(
                    entries,
                    [RetrieverKind(k) for k in job.kinds],
                    job.iterations,
                    store=store,
                    cfg=self.config.retrieval,
                    embedder=self.embedder,
                    llm=self.llm,
                    rewrite_llm=self.rewrite_llm,
                )
                job.report_json = render_report(report, records, "json")
                job.status = "done"
            except Exception as exc:  # job failures are reported, not raised
                job.status = "failed"
                job.error = str(exc)


def build_state(config: AppConfig) -> AppState:
    store, generation = load_current(config.store_path)
    return AppState(
        config=config,
        store_handle=StoreHandle(store, generation),
        embedder=config.build_embedder(),
        llm=config.build_llm(),
        rewrite_llm=config.build_rewrite_llm(),
    )


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse({"error": message, "code": code, **extra}, status_code=status)


def _trace_payload(trace: AnswerTrace) -> dict:
    return {
        "trace_id": trace.trace_id,
        "original_query": trace.original_query,
        "rewritten_query": trace.rewrite.enhanced_query,
        "was_rewritten": trace.rewrite.was_rewritten,
        "raw_rewrite_output": trace.rewrite.raw_model_output,
        "retriever": trace.retrieval.kind.value,
        "context": [
            {
                "id": si.item.id,
                "score": si.score,
                "rank": si.rank,
                "title": si.item.title,
                "text": si.item.text,
                "source_kind": si.item.source_kind,
                "chunk_index": si.item.chunk_index,
                "chunk_count": si.item.chunk_count,
                "per_retriever": si.per_retriever,
            }
            for si in trace.retrieval.selected
        ],
        "dropped_below_threshold": trace.retrieval.dropped_below_threshold,
        "final_prompt": trace.final_prompt,
        "answer": trace.answer,
        "step_timings": trace.step_timings,
        "generation_failed": trace.generation_failed,
        "created_at": trace.created_at.isoformat(),
    }


class MessageIn(BaseModel):
    text: str = ""
    retriever: str | None = None


class EvalRunIn(BaseModel):
    kinds: list[str] | None = None
    iterations: int | None = None


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="corpusqa")
    app.state.corpusqa = state

    @app.post("/api/sessions")
    def create_session():
        state.evict_expired()
        session = ChatSession(id=uuid.uuid4().hex)
        with state.lock:
            state.sessions[session.id] = _SessionEntry(session=session, last_access=time.monotonic())
        return {"session_id": session.id}

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        with state.lock:
            entry = state.sessions.get(session_id)
        if entry is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        entry.last_access = time.monotonic()
        return {
            "session_id": session_id,
            "turns": [
                {
                    "role": t.role,
                    "text": t.text,
                    "trace_id": t.trace_id,
                    "timestamp": t.timestamp.isoformat(),
                }
                for t in entry.session.turns
            ],
        }

    # Sync on purpose: FastAPI runs it in a worker thread, so the session
    # lock is acquired and released on the same thread that runs the turn.
    @app.post("/api/sessions/{session_id}/messages")
    def post_message(session_id: str, body: MessageIn):
        text = body.text.strip()
        if not text:
            return _error(400, "empty_message", "message text must be non-empty")
        kind_name = body.retriever or state.config.default_retriever.value
        try:
            kind = RetrieverKind(kind_name)
        except ValueError:
            return _error(400, "unknown_retriever", f"unknown retriever {kind_name!r}")

        with state.lock:
            entry = state.sessions.get(session_id)
        if entry is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        entry.last_access = time.monotonic()

        if not entry.session.lock.acquire(blocking=False):
            return _error(409, "session_busy", "a message is already being processed on this session")
        try:
            store, _ = state.store_handle.get()
            trace = chat_turn(
                entry.session,
                text,
                kind,
                store,
                state.config.retrieval,
                state.embedder,
                state.llm,
                rewrite_llm=state.rewrite_llm,
            )
        except CorpusQaError as exc:
            return _error(500, "internal", str(exc))
        finally:
            entry.session.lock.release()

        with state.lock:
            state.traces[trace.trace_id] = trace
        if trace.generation_failed:
            return _error(
                503, "llm_unreachable", "the language model endpoint is unreachable",
                trace_id=trace.trace_id,
            )
        return {
            "answer": trace.answer,
            "trace_id": trace.trace_id,
            "rewritten_query": trace.rewrite.enhanced_query,
            "was_rewritten": trace.rewrite.was_rewritten,
            "context": [
                {"id": si.item.id, "score": si.score, "text": si.item.text, "title": si.item.title}
                for si in trace.retrieval.selected
            ],
            "timings": trace.step_timings,
        }

    @app.get("/api/traces/{trace_id}")
    def get_trace(trace_id: str):
        with state.lock:
            trace = state.traces.get(trace_id)
        if trace is None:
            return _error(404, "unknown_trace", f"no trace {trace_id!r}")
        return _trace_payload(trace)

    @app.post("/api/eval/run")
    def start_eval(body: EvalRunIn):
        if not state.config.eval.ground_truth:
            return _error(400, "eval_not_configured", "no ground-truth dataset configured")
        kinds = body.kinds or list(state.config.eval.kinds)
        try:
            kinds = [RetrieverKind(k).value for k in kinds]
        except ValueError as exc:
            return _error(400, "unknown_retriever", str(exc))
        iterations = body.iterations or state.config.eval.iterations
        job = state.enqueue_eval(kinds, iterations)
        return {"job_id": job.id}

    @app.get("/api/eval/{job_id}")
    def get_eval(job_id: str):
        with state.lock:
            job = state.jobs.get(job_id)
        if job is None:
            return _error(404, "unknown_job", f"no eval job {job_id!r}")
        payload = {"job_id": job.id, "status": job.status}
        if job.status == "done" and job.report_json is not None:
            payload["report"] = json.loads(job.report_json.decode("utf-8"))["report"]
        if job.status == "failed":
            payload["error"] = job.error
        return payload

    @app.get("/api/health")
    def health():
        store, generation = state.store_handle.get()
        return {
            "status": "ok",
            "store_generation": generation,
            "item_count": store.manifest.item_count,
        }

    return app
