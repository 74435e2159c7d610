"""Rule-based tokenizer shared by chunking and the term retrievers.

A token is either a maximal run of alphanumerics or a single other
non-whitespace character. This deliberately diverges from any model's BPE:
chunk sizes are tunables, and keeping the tokenizer dependency-free makes
every count reproducible. Callers that need model-exact counts can pass
their own tokenizer callable where one is accepted.
"""

import re
from typing import Callable

# Alphanumeric runs ([^\W_] is "word character minus underscore"), else one
# non-space character per token.
_TOKEN = re.compile(r"[^\W_]+|\S", re.UNICODE)

Tokenizer = Callable[[str], list[str]]


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text)


def token_spans(text: str) -> list[tuple[int, int]]:
    """Character (start, end) offsets of each token, for window slicing."""
    return [m.span() for m in _TOKEN.finditer(text)]


def count_tokens(text: str, tokenizer: Tokenizer | None = None) -> int:
    if tokenizer is not None:
        return len(tokenizer(text))
    return len(tokenize(text))
