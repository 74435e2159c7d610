"""Embedding backends and cosine similarity.

Two backends share one interface: a deterministic local hash embedder used
for tests and offline work (same text always yields the same vector, across
processes), and an HTTP client for a real embedding service. The store
manifest records which one produced the vectors; mixing them is a fatal
configuration error at query time.
"""

import hashlib
import math
from typing import Iterable, Protocol

import httpx

from corpusqa.errors import SimilarityUndefinedError, TransportError
from corpusqa.corpus.tokenizer import tokenize


class Embedder(Protocol):
    spec: str
    dimension: int

    def embed(self, text: str) -> list[float]: ...

    def embed_batch(self, texts: Iterable[str]) -> list[list[float]]: ...


def cosine(u: list[float], v: list[float]) -> float:
    """Cosine similarity, clamped into [-1, 1] against rounding drift."""
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    if nu == 0.0 or nv == 0.0:
        raise SimilarityUndefinedError("cosine of a zero vector is undefined")
    return max(-1.0, min(1.0, dot / (nu * nv)))


class HashEmbedder:
    """Bucket-count embedder: hash each token into one of ``dimension``
    buckets, count, L2-normalize. Deterministic across process restarts."""

    def __init__(self, dimension: int = 64):
        self.dimension = dimension
        self.spec = f"local-hash-{dimension}"

    def _bucket(self, token: str) -> int:
        digest = hashlib.sha256(token.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "big") % self.dimension

    def embed(self, text: str) -> list[float]:
        counts = [0.0] * self.dimension
        for token in tokenize(text.lower()):
            counts[self._bucket(token)] += 1.0
        norm = math.sqrt(sum(c * c for c in counts))
        if norm == 0.0:
            return counts
        return [c / norm for c in counts]

    def embed_batch(self, texts: Iterable[str]) -> list[list[float]]:
        return [self.embed(t) for t in texts]


class HttpEmbedder:
    """Client for a remote embedding endpoint.

    Wire contract: POST {base_url}/embeddings with {"model", "input": [...]}
    returning {"vectors": [[...], ...]}.
    """

    def __init__(self, base_url: str, model: str, dimension: int, timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.dimension = dimension
        self.timeout = timeout
        self.spec = f"http:{self.base_url}#{model}"

    def embed(self, text: str) -> list[float]:
        return self.embed_batch([text])[0]

    def embed_batch(self, texts: Iterable[str]) -> list[list[float]]:
        texts = list(texts)
        try:
            resp = httpx.post(
                f"{self.base_url}/embeddings",
                json={"model": self.model, "input": texts},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            vectors = resp.json()["vectors"]
        except (httpx.HTTPError, KeyError, ValueError) as exc:
            raise TransportError(f"embedding request failed: {exc}") from exc
        return [list(map(float, v)) for v in vectors]
