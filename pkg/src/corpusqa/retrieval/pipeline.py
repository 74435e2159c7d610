"""Top-k selection, similarity thresholding, reordering, and compression."""

import enum
from dataclasses import dataclass, replace

from corpusqa.corpus.chunking import ContextItem
from corpusqa.corpus.embedding import Embedder, cosine
from corpusqa.corpus.store import VectorStore
from corpusqa.corpus.tokenizer import count_tokens
from corpusqa.errors import CorpusQaError
from corpusqa.retrieval import scorers

NO_RELEVANT_CONTENT = "NO_RELEVANT_CONTENT"

_COMPRESSION_PROMPT = (
    "Extract the sentences from the document below that are relevant to the "
    "question. Copy them verbatim and output nothing else. If no part of the "
    f"document is relevant, reply exactly {NO_RELEVANT_CONTENT}.\n\n"
    "Question: {query}\n\nDocument:\n{text}"
)


class RetrieverKind(str, enum.Enum):
    TFIDF = "tfidf"
    BM25 = "bm25"
    EMBEDDING = "embedding"
    ENSEMBLE = "ensemble"


@dataclass(frozen=True)
class RetrievalConfig:
    k: int = 3
    similarity_threshold: float = 0.7
    candidate_pool: int = 20
    bm25_k1: float = 1.2
    bm25_b: float = 0.75
    compression_enabled: bool = False
    reorder_enabled: bool = True

    def __post_init__(self):
        if not 1 <= self.k <= self.candidate_pool:
            raise ValueError(f"k={self.k} must be in [1, candidate_pool={self.candidate_pool}]")
        if not 0.0 <= self.similarity_threshold <= 1.0:
            raise ValueError(f"similarity_threshold={self.similarity_threshold} outside [0, 1]")


@dataclass(frozen=True)
class ScoredItem:
    item: ContextItem
    score: float
    per_retriever: dict[str, float]
    rank: int


@dataclass(frozen=True)
class RetrievalResult:
    query: str
    kind: RetrieverKind
    selected: tuple[ScoredItem, ...]
    dropped_below_threshold: int


def select_top_k(
    scores: dict[str, float],
    query: str,
    store: VectorStore,
    cfg: RetrievalConfig,
    embedder: Embedder,
    detail: dict[str, dict[str, float]] | None = None,
) -> tuple[list[ScoredItem], int]:
    """Rank by score (ties broken by id), keep the top k, then drop items
    whose embedding cosine to the query does not exceed the threshold.

    The cosine test applies to every retriever kind: term scores are
    unbounded, so the threshold is only meaningful against cosine. It may
    leave fewer than k items, possibly none; that is intended, k is a cap
    and not a quota. A threshold of 0 disables the test.
    """
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[: cfg.k]
    if cfg.similarity_threshold > 0.0:
        query_vector = embedder.embed(query)
        has_query_vector = any(query_vector)
        kept = []
        for item_id, score in ranked:
            if not has_query_vector:
                continue
            similarity = cosine(query_vector, list(store.records[item_id].vector))
            if similarity > cfg.similarity_threshold:
                kept.append((item_id, score))
    else:
        kept = ranked
    dropped = len(ranked) - len(kept)

    selected = []
    for rank, (item_id, score) in enumerate(kept, start=1):
        if detail:
            per = {name: m[item_id] for name, m in detail.items() if item_id in m}
        else:
            per = {}
        selected.append(
            ScoredItem(item=store.records[item_id].item, score=score, per_retriever=per, rank=rank)
        )
    return selected, dropped


def reorder_lost_in_middle(items: list) -> list:
    """Out-side-in placement: best item first, second best last, third second
    from the front, and so on, leaving the least relevant in the middle."""
    out = [None] * len(items)
    front, back = 0, len(items) - 1
    for i, item in enumerate(items):
        if i % 2 == 0:
            out[front] = item
            front += 1
        else:
            out[back] = item
            back -= 1
    return out


def compress_context(scored: ScoredItem, query: str, llm) -> ScoredItem:
    """Ask the LLM to keep only the sentences relevant to the query.

    Best-effort by design: on any failure, an empty reply, a no-content
    reply, or output longer than the original, the item passes through
    unchanged.
    """
    prompt = _COMPRESSION_PROMPT.format(query=query, text=scored.item.text)
    try:
        output = llm.complete(prompt).strip()
    except CorpusQaError:
        return scored
    if not output or output == NO_RELEVANT_CONTENT or len(output) > len(scored.item.text):
        return scored
    compressed = replace(scored.item, text=output, token_count=count_tokens(output))
    return replace(scored, item=compressed)


def retrieve(
    query: str,
    kind: RetrieverKind,
    store: VectorStore,
    cfg: RetrievalConfig,
    embedder: Embedder,
    llm=None,
) -> RetrievalResult:
    """Score, select, optionally compress, optionally reorder."""
    kind = RetrieverKind(kind)
    if kind is RetrieverKind.TFIDF:
        score_map = scorers.tfidf_scores(query, store)
        detail = {kind.value: score_map}
    elif kind is RetrieverKind.BM25:
        score_map = scorers.bm25_scores(query, store, cfg)
        detail = {kind.value: score_map}
    elif kind is RetrieverKind.EMBEDDING:
        score_map = scorers.embedding_scores(query, store, embedder)
        detail = {kind.value: score_map}
    else:
        score_map, norm_bm25, norm_embed = scorers.ensemble_score_parts(query, store, cfg, embedder)
        detail = {
            RetrieverKind.BM25.value: norm_bm25,
            RetrieverKind.EMBEDDING.value: norm_embed,
            RetrieverKind.ENSEMBLE.value: score_map,
        }

    selected, dropped = select_top_k(score_map, query, store, cfg, embedder, detail=detail)
    if cfg.compression_enabled and llm is not None:
        selected = [compress_context(si, query, llm) for si in selected]
    if cfg.reorder_enabled:
        selected = reorder_lost_in_middle(selected)
    return RetrievalResult(
        query=query, kind=kind, selected=tuple(selected), dropped_below_threshold=dropped
    )
