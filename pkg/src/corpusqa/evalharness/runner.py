"""Multi-iteration evaluation runs over the chat pipeline.

Each question runs as a fresh single-turn session; response time is the
wall clock from submitting the question to receiving the full answer.
Results are averaged across iterations per retriever kind.
"""

import statistics
import time
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone

from corpusqa.corpus.embedding import Embedder
from corpusqa.corpus.store import VectorStore
from corpusqa.dialogue.chat import chat_turn
from corpusqa.dialogue.llm import LlmClient
from corpusqa.dialogue.session import ChatSession
from corpusqa.errors import SimilarityUndefinedError
from corpusqa.evalharness.groundtruth import GroundTruthEntry, validate_supporting_ids
from corpusqa.evalharness.metrics import answer_similarity, recall_at_k
from corpusqa.retrieval.pipeline import RetrievalConfig, RetrieverKind


@dataclass(frozen=True)
class EvalRecord:
    entry_id: str
    retriever_kind: str
    iteration: int
    retrieved_ids: tuple[str, ...]
    generated_answer: str
    answer_similarity: float
    response_time: float
    step_timings: dict[str, float]
    generation_failed: bool = False


@dataclass(frozen=True)
class KindAggregate:
    recall_at_k: float  # percentage
    mean_answer_similarity: float  # percentage
    response_time_mean: float
    response_time_median: float
    response_time_q1: float
    response_time_q3: float


@dataclass(frozen=True)
class EvalReport:
    kinds: dict[str, KindAggregate]
    iterations: int
    k: int
    timestamp: str
    config: dict = field(default_factory=dict)


def _quartiles(values: list[float]) -> tuple[float, float, float]:
    if len(values) == 1:
        return values[0], values[0], values[0]
    q1, median, q3 = statistics.quantiles(values, n=4, method="inclusive")
    return q1, median, q3


def run_eval(
    ground_truth: list[GroundTruthEntry],
    kinds: list[RetrieverKind],
    iterations: int = 3,
    *,
    store: VectorStore,
    cfg: RetrievalConfig,
    embedder: Embedder,
    llm: LlmClient,
    rewrite_llm: LlmClient | None = None,
    created_at: str | None = None,
) -> tuple[EvalReport, list[EvalRecord]]:
    """Evaluate every retriever kind over the full dataset, ``iterations`` times."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    validate_supporting_ids(ground_truth, store)

    records: list[EvalRecord] = []
    for kind in [RetrieverKind(k) for k in kinds]:
        for iteration in range(1, iterations + 1):
            for entry in ground_truth:
                session = ChatSession(id=f"eval-{uuid.uuid4().hex}")
                started = time.perf_counter()
                trace = chat_turn(
                    session, entry.question, kind, store, cfg, embedder, llm, rewrite_llm=rewrite_llm
                )
                response_time = time.perf_counter() - started
                if trace.generation_failed:
                    similarity = 0.0
                else:
                    try:
                        similarity = answer_similarity(trace.answer, entry.reference_answer, embedder)
                    except (ValueError, SimilarityUndefinedError):
                        similarity = 0.0
                records.append(
                    EvalRecord(
                        entry_id=entry.id,
                        retriever_kind=kind.value,
                        iteration=iteration,
                        retrieved_ids=tuple(si.item.id for si in trace.retrieval.selected),
                        generated_answer=trace.answer,
                        answer_similarity=similarity,
                        response_time=response_time,
                        step_timings=dict(trace.step_timings),
                        generation_failed=trace.generation_failed,
                    )
                )

    aggregates: dict[str, KindAggregate] = {}
    for kind in [RetrieverKind(k) for k in kinds]:
        kind_records = [r for r in records if r.retriever_kind == kind.value]
        recalls = [
            recall_at_k(
                [r for r in kind_records if r.iteration == it], ground_truth, cfg.k
            )
            for it in range(1, iterations + 1)
        ]
        times = [r.response_time for r in kind_records]
        q1, median, q3 = _quartiles(times)
        aggregates[kind.value] = KindAggregate(
            recall_at_k=statistics.fmean(recalls),
            mean_answer_similarity=100.0 * statistics.fmean(r.answer_similarity for r in kind_records),
            response_time_mean=statistics.fmean(times),
            response_time_median=median,
            response_time_q1=q1,
            response_time_q3=q3,
        )

    report = EvalReport(
        kinds=aggregates,
        iterations=iterations,
        k=cfg.k,
        timestamp=created_at or datetime.now(timezone.utc).isoformat(),
        config={
            "k": cfg.k,
            "similarity_threshold": cfg.similarity_threshold,
            "candidate_pool": cfg.candidate_pool,
            "bm25_k1": cfg.bm25_k1,
            "bm25_b": cfg.bm25_b,
            "compression_enabled": cfg.compression_enabled,
            "reorder_enabled": cfg.reorder_enabled,
            "embedder": embedder.spec,
            "kinds": [RetrieverKind(k).value for k in kinds],
            "iterations": iterations,
        },
    )
    return report, records
