"""Splitting rendered documents into retrievable context items.

Chat threads are short enough to embed whole, so they map to a single item.
Wiki pages can exceed model context limits and are windowed over tokens with
an overlap; every chunk is prefixed with the page title and its position so
a chunk read in isolation still identifies its source.
"""

from dataclasses import dataclass

from corpusqa.corpus.tokenizer import count_tokens, token_spans


@dataclass(frozen=True)
class ContextItem:
    """One retrievable unit: a whole thread or one page chunk."""

    id: str
    text: str
    source_kind: str  # "teams" | "confluence"
    title: str
    chunk_index: int
    chunk_count: int
    token_count: int

    def __post_init__(self):
        if not self.text:
            raise ValueError(f"context item {self.id!r} has empty text")
        if not 0 <= self.chunk_index < self.chunk_count:
            raise ValueError(
                f"context item {self.id!r}: chunk_index {self.chunk_index} "
                f"outside chunk_count {self.chunk_count}"
            )


@dataclass(frozen=True)
class ChunkingConfig:
    chunk_size: int = 800
    overlap: int = 200

    def __post_init__(self):
        if not 0 <= self.overlap < self.chunk_size:
            raise ValueError(f"overlap {self.overlap} must be in [0, chunk_size={self.chunk_size})")

    @property
    def stride(self) -> int:
        return self.chunk_size - self.overlap


def split_teams(doc: str, source_id: str) -> list[ContextItem]:
    """A rendered thread embeds as exactly one unit."""
    if not doc.strip():
        return []
    return [
        ContextItem(
            id=f"{source_id}:0",
            text=doc,
            source_kind="teams",
            title="",
            chunk_index=0,
            chunk_count=1,
            token_count=count_tokens(doc),
        )
    ]


def chunk_token_windows(n_tokens: int, cfg: ChunkingConfig) -> list[tuple[int, int]]:
    """Token-index windows [start, end) covering a document of n_tokens."""
    if n_tokens <= 0:
        return []
    windows = []
    start = 0
    while True:
        end = min(start + cfg.chunk_size, n_tokens)
        windows.append((start, end))
        if end >= n_tokens:
            break
        start += cfg.stride
    return windows


def split_confluence(doc: str, title: str, cfg: ChunkingConfig, source_id: str) -> list[ContextItem]:
    """Window a page body into overlapping token chunks, title-prefixed."""
    spans = token_spans(doc)
    windows = chunk_token_windows(len(spans), cfg)
    total = len(windows)
    items = []
    for i, (start, end) in enumerate(windows):
        window_text = doc[spans[start][0] : spans[end - 1][1]]
        text = f"Page Title: {title} (part {i + 1} of {total})\n{window_text}"
        items.append(
            ContextItem(
                id=f"{source_id}:{i}",
                text=text,
                source_kind="confluence",
                title=title,
                chunk_index=i,
                chunk_count=total,
                token_count=count_tokens(text),
            )
        )
    return items
