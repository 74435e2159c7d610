"""Exception taxonomy shared across the package."""


class CorpusQaError(Exception):
    """Base class for all package errors."""


class SchemaError(CorpusQaError):
    """A tabular export is missing a required column."""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"missing required column: {column}")


class TransportError(CorpusQaError):
    """Network failure that persisted across retries."""

    def __init__(self, message: str, attempts: int = 1):
        self.attempts = attempts
        super().__init__(message)


class AuthError(CorpusQaError):
    """Remote endpoint rejected our credentials (401/403). Not retried."""


class ProtocolError(CorpusQaError):
    """Remote endpoint replied with something we cannot parse."""


class DimensionMismatchError(CorpusQaError):
    """An embedding vector does not match the store dimension."""

    def __init__(self, item_id: str, expected: int, got: int):
        self.item_id = item_id
        self.expected = expected
        self.got = got
        super().__init__(
            f"embedding for item {item_id!r} has dimension {got}, expected {expected}"
        )


class SimilarityUndefinedError(CorpusQaError):
    """Cosine similarity requested against a zero vector."""


class ConfigurationError(CorpusQaError):
    """Components are wired together inconsistently (fatal)."""


class GenerationError(CorpusQaError):
    """Answer generation failed after retries. Carries the trace id."""

    def __init__(self, message: str, trace_id: str = ""):
        self.trace_id = trace_id
        super().__init__(message)


class GroundTruthError(CorpusQaError):
    """Ground-truth file is malformed or references unknown items."""
