"""Automatically computed accuracy metrics."""

from corpusqa.corpus.embedding import Embedder, cosine
from corpusqa.evalharness.groundtruth import GroundTruthEntry


def recall_at_k(records, ground_truth: list[GroundTruthEntry], k: int) -> float:
    """Percentage of questions whose top-k retrieved items include a
    supporting item. ``records`` covers one retriever kind and iteration."""
    by_entry = {record.entry_id: record for record in records}
    hits = 0
    for entry in ground_truth:
        record = by_entry.get(entry.id)
        if record is None:
            raise ValueError(f"no eval record for ground-truth entry {entry.id!r}")
        if set(record.retrieved_ids[:k]) & entry.supporting_item_ids:
            hits += 1
    if not ground_truth:
        return 0.0
    return 100.0 * hits / len(ground_truth)


def answer_similarity(generated: str, reference: str, embedder: Embedder) -> float:
    """Embedding cosine between the answers, clamped into [0, 1]."""
    if not generated or not reference:
        raise ValueError("answer similarity needs two non-empty strings")
    value = cosine(embedder.embed(generated), embedder.embed(reference))
    return max(0.0, min(1.0, value))
