"""Interchangeable retrievers and the top-k selection pipeline."""

from corpusqa.retrieval.pipeline import (
    RetrievalConfig,
    RetrievalResult,
    RetrieverKind,
    ScoredItem,
    compress_context,
    reorder_lost_in_middle,
    retrieve,
    select_top_k,
)
from corpusqa.retrieval.scorers import (
    bm25_scores,
    embedding_scores,
    ensemble_score_parts,
    ensemble_scores,
    tfidf_scores,
)

__all__ = [
    "RetrievalConfig",
    "RetrievalResult",
    "RetrieverKind",
    "ScoredItem",
    "bm25_scores",
    "compress_context",
    "embedding_scores",
    "ensemble_score_parts",
    "ensemble_scores",
    "reorder_lost_in_middle",
    "retrieve",
    "select_top_k",
    "tfidf_scores",
]
