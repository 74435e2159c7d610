"""Vector store persistence and generation management.

A store is immutable once built. On disk a generation is a directory with
``manifest.json`` plus ``items.jsonl`` (one record per line, vector inline);
the store root's ``CURRENT`` file names the live generation and is replaced
atomically, so rebuilds never disturb readers of the previous generation.
"""

import json
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import cached_property
from pathlib import Path

from corpusqa.corpus.chunking import ContextItem
from corpusqa.corpus.embedding import Embedder
from corpusqa.corpus.tokenizer import tokenize
from corpusqa.errors import DimensionMismatchError, TransportError

_MANIFEST_NAME = "manifest.json"
_ITEMS_NAME = "items.jsonl"
_CURRENT_NAME = "CURRENT"


@dataclass(frozen=True)
class StoreManifest:
    embedder: str
    dimension: int
    item_count: int
    created_at: str


@dataclass(frozen=True)
class StoredItem:
    item: ContextItem
    vector: tuple[float, ...]


class TermStats:
    """Per-item term statistics for the lexical retrievers, built once per store."""

    def __init__(self, records: "dict[str, StoredItem]"):
        self.term_counts: dict[str, dict[str, int]] = {}
        self.lengths: dict[str, int] = {}
        self.doc_freq: dict[str, int] = {}
        for item_id, rec in records.items():
            counts: dict[str, int] = {}
            for token in tokenize(rec.item.text.lower()):
                counts[token] = counts.get(token, 0) + 1
            self.term_counts[item_id] = counts
            self.lengths[item_id] = sum(counts.values())
            for term in counts:
                self.doc_freq[term] = self.doc_freq.get(term, 0) + 1
        self.n_docs = len(records)
        self.avg_length = (sum(self.lengths.values()) / self.n_docs) if self.n_docs else 0.0


@dataclass
class VectorStore:
    manifest: StoreManifest
    records: dict[str, StoredItem] = field(default_factory=dict)

    @cached_property
    def term_stats(self) -> TermStats:
        return TermStats(self.records)


def build_store(items: list[ContextItem], embedder: Embedder, created_at: str | None = None) -> VectorStore:
    """Embed every item once and assemble the store.

    ``created_at`` is injectable so rebuilds over identical input can produce
    byte-identical files.
    """
    records: dict[str, StoredItem] = {}
    for item in items:
        if item.id in records:
            raise ValueError(f"duplicate context item id {item.id!r}")
        try:
            vector = embedder.embed(item.text)
        except TransportError as exc:
            raise TransportError(f"embedding failed for item {item.id!r}: {exc}") from exc
        if len(vector) != embedder.dimension:
            raise DimensionMismatchError(item.id, embedder.dimension, len(vector))
        records[item.id] = StoredItem(item=item, vector=tuple(vector))
    manifest = StoreManifest(
        embedder=embedder.spec,
        dimension=embedder.dimension,
        item_count=len(records),
        created_at=created_at or datetime.now(timezone.utc).isoformat(),
    )
    return VectorStore(manifest=manifest, records=records)


def save_store(store: VectorStore, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        "embedder": store.manifest.embedder,
        "dimension": store.manifest.dimension,
        "item_count": store.manifest.item_count,
        "created_at": store.manifest.created_at,
    }
    (directory / _MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    with open(directory / _ITEMS_NAME, "w", encoding="utf-8") as fh:
        for rec in store.records.values():
            item = rec.item
            fh.write(
                json.dumps(
                    {
                        "id": item.id,
                        "text": item.text,
                        "source_kind": item.source_kind,
                        "title": item.title,
                        "chunk_index": item.chunk_index,
                        "chunk_count": item.chunk_count,
                        "token_count": item.token_count,
                        "vector": list(rec.vector),
                    },
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
                + "\n"
            )


def load_store(directory: str | Path) -> VectorStore:
    directory = Path(directory)
    manifest_data = json.loads((directory / _MANIFEST_NAME).read_text(encoding="utf-8"))
    manifest = StoreManifest(
        embedder=manifest_data["embedder"],
        dimension=manifest_data["dimension"],
        item_count=manifest_data["item_count"],
        created_at=manifest_data["created_at"],
    )
    records: dict[str, StoredItem] = {}
    with open(directory / _ITEMS_NAME, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            data = json.loads(line)
            vector = tuple(float(x) for x in data["vector"])
            if len(vector) != manifest.dimension:
                raise DimensionMismatchError(data["id"], manifest.dimension, len(vector))
            item = ContextItem(
                id=data["id"],
                text=data["text"],
                source_kind=data["source_kind"],
                title=data["title"],
                chunk_index=data["chunk_index"],
                chunk_count=data["chunk_count"],
                token_count=data["token_count"],
            )
            records[item.id] = StoredItem(item=item, vector=vector)
    if len(records) != manifest.item_count:
        raise ValueError(
            f"store at {directory} holds {len(records)} items, manifest says {manifest.item_count}"
        )
    return VectorStore(manifest=manifest, records=records)


def write_generation(store: VectorStore, root: str | Path) -> str:
    """Write a new generation directory and atomically point CURRENT at it."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    existing = sorted(p.name for p in root.glob("gen-*") if p.is_dir())
    next_index = 1
    if existing:
        next_index = max(int(name.split("-")[1]) for name in existing) + 1
    gen_name = f"gen-{next_index:06d}"
    save_store(store, root / gen_name)
    tmp = root / (_CURRENT_NAME + ".tmp")
    tmp.write_text(gen_name + "\n", encoding="utf-8")
    os.replace(tmp, root / _CURRENT_NAME)
    return gen_name


def load_current(root: str | Path) -> tuple[VectorStore, str]:
    root = Path(root)
    gen_name = (root / _CURRENT_NAME).read_text(encoding="utf-8").strip()
    return load_store(root / gen_name), gen_name


class StoreHandle:
    """Thread-safe holder for the live store generation.

    Readers grab a consistent (store, generation) pair; a swap replaces the
    pair without invalidating stores already handed out, so in-flight work
    finishes on the generation it started with.
    """

    def __init__(self, store: VectorStore, generation: str = ""):
        self._lock = threading.Lock()
        self._store = store
        self._generation = generation

    def get(self) -> tuple[VectorStore, str]:
        with self._lock:
            return self._store, self._generation

    def swap(self, store: VectorStore, generation: str = "") -> None:
        with self._lock:
            self._store = store
            self._generation = generation
