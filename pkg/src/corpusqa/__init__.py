"""Retrieval-augmented question answering over chat threads and wiki pages."""

__version__ = "0.1.0"
