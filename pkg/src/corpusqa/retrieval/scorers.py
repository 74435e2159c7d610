"""Scoring functions for the four retriever kinds.

All lexical scoring tokenizes exactly like the corpus (same tokenizer,
lowercased) and sums over the query token sequence, so a term repeated in
the query contributes once per occurrence. Every scorer returns a full
``id -> score`` map over the store; selection happens downstream.
"""

import math

from corpusqa.corpus.embedding import Embedder, cosine
from corpusqa.corpus.store import VectorStore
from corpusqa.corpus.tokenizer import tokenize
from corpusqa.errors import ConfigurationError


def _query_terms(query: str) -> list[str]:
    return [t.lower() for t in tokenize(query)]


def tfidf_scores(query: str, store: VectorStore) -> dict[str, float]:
    """score(d) = sum over query terms of tf(t, d) * idf(t),
    with idf(t) = ln((N + 1) / (df(t) + 1)) + 1."""
    terms = _query_terms(query)
    stats = store.term_stats
    if not terms or stats.n_docs == 0:
        return {}
    idf = {
        t: math.log((stats.n_docs + 1) / (stats.doc_freq.get(t, 0) + 1)) + 1.0
        for t in set(terms)
    }
    scores: dict[str, float] = {}
    for item_id, counts in stats.term_counts.items():
        scores[item_id] = sum(counts.get(t, 0) * idf[t] for t in terms)
    return scores


def bm25_scores(query: str, store: VectorStore, cfg) -> dict[str, float]:
    """Okapi BM25 with idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))."""
    terms = _query_terms(query)
    stats = store.term_stats
    if not terms or stats.n_docs == 0:
        return {}
    k1, b = cfg.bm25_k1, cfg.bm25_b
    n = stats.n_docs
    idf = {
        t: math.log(1.0 + (n - stats.doc_freq.get(t, 0) + 0.5) / (stats.doc_freq.get(t, 0) + 0.5))
        for t in set(terms)
    }
    scores: dict[str, float] = {}
    for item_id, counts in stats.term_counts.items():
        length_norm = k1 * (1.0 - b + b * stats.lengths[item_id] / stats.avg_length)
        total = 0.0
        for t in terms:
            tf = counts.get(t, 0)
            if tf:
                total += idf[t] * tf * (k1 + 1.0) / (tf + length_norm)
        scores[item_id] = total
    return scores


def embedding_scores(query: str, store: VectorStore, embedder: Embedder) -> dict[str, float]:
    """Cosine between the embedded query and each stored vector."""
    if embedder.spec != store.manifest.embedder:
        raise ConfigurationError(
            f"embedder {embedder.spec!r} does not match store manifest {store.manifest.embedder!r}"
        )
    if not store.records:
        return {}
    query_vector = embedder.embed(query)
    if not any(query_vector):
        return {}
    return {
        item_id: cosine(query_vector, list(rec.vector))
        for item_id, rec in store.records.items()
    }


def _top_candidates(scores: dict[str, float], pool: int) -> list[str]:
    return [i for i, _ in sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:pool]]


def _min_max(scores: dict[str, float], ids: list[str]) -> dict[str, float]:
    if not ids:
        return {}
    values = [scores[i] for i in ids]
    low, high = min(values), max(values)
    if high == low:
        return {i: 1.0 for i in ids}
    return {i: (scores[i] - low) / (high - low) for i in ids}


def ensemble_score_parts(
    query: str, store: VectorStore, cfg, embedder: Embedder
) -> tuple[dict[str, float], dict[str, float], dict[str, float]]:
    """(final, normalized bm25, normalized embedding) over the candidate union.

    Each constituent contributes its top ``candidate_pool`` items with scores
    min-max normalized within that candidate list; an item missing from a
    constituent's candidates contributes 0 for it. The final score is the
    plain average of the two.
    """
    bm25 = bm25_scores(query, store, cfg)
    embed = embedding_scores(query, store, embedder)
    norm_bm25 = _min_max(bm25, _top_candidates(bm25, cfg.candidate_pool))
    norm_embed = _min_max(embed, _top_candidates(embed, cfg.candidate_pool))
    union = set(norm_bm25) | set(norm_embed)
    final = {i: (norm_bm25.get(i, 0.0) + norm_embed.get(i, 0.0)) / 2.0 for i in union}
    return final, norm_bm25, norm_embed


def ensemble_scores(query: str, store: VectorStore, cfg, embedder: Embedder) -> dict[str, float]:
    final, _, _ = ensemble_score_parts(query, store, cfg, embedder)
    return final
