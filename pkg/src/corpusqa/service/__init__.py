"""Deployment surface: configuration, HTTP API, and command-line interface."""

from corpusqa.service.config import AppConfig

__all__ = ["AppConfig"]
