"""Context-item corpus: tokenization, chunking, embeddings, vector store."""

from corpusqa.corpus.chunking import ChunkingConfig, ContextItem, split_confluence, split_teams
from corpusqa.corpus.embedding import Embedder, HashEmbedder, HttpEmbedder, cosine
from corpusqa.corpus.store import (
    StoreHandle,
    StoredItem,
    StoreManifest,
    VectorStore,
    build_store,
    load_current,
    load_store,
    save_store,
    write_generation,
)
from corpusqa.corpus.tokenizer import count_tokens, token_spans, tokenize

__all__ = [
    "ChunkingConfig",
    "ContextItem",
    "Embedder",
    "HashEmbedder",
    "HttpEmbedder",
    "StoreHandle",
    "StoreManifest",
    "StoredItem",
    "VectorStore",
    "build_store",
    "cosine",
    "count_tokens",
    "load_current",
    "load_store",
    "save_store",
    "split_confluence",
    "split_teams",
    "token_spans",
    "tokenize",
    "write_generation",
]
