"""Application configuration: one TOML file, env-var overrides for secrets."""

import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from corpusqa.corpus.chunking import ChunkingConfig
from corpusqa.corpus.embedding import HashEmbedder, HttpEmbedder
from corpusqa.dialogue.llm import HttpLlmClient, LlmEndpointSpec, ScriptedLlm
from corpusqa.errors import ConfigurationError
from corpusqa.retrieval.pipeline import RetrievalConfig, RetrieverKind

ENV_LLM_BASE_URL = "CORPUSQA_LLM_BASE_URL"
ENV_LLM_AUTH_TOKEN = "CORPUSQA_LLM_AUTH_TOKEN"


@dataclass(frozen=True)
class LlmSection:
    backend: str = "http"  # http | scripted
    base_url: str = "http://localhost:8801"
    model_name: str = "llama-2-7b-chat"
    temperature: float = 0.0
    max_tokens: int = 512
    timeout: float = 120.0
    prompt_dialect: str = "llama2_inst"
    auth_token: str = ""
    max_retries: int = 3
    backoff_start: float = 0.5
    max_concurrent: int = 4
    script_path: str = ""

    def build(self):
        if self.backend == "scripted":
            if not self.script_path:
                raise ConfigurationError("scripted llm backend requires script_path")
            return ScriptedLlm.from_file(self.script_path)
        spec = LlmEndpointSpec(
            base_url=self.base_url,
            model_name=self.model_name,
            temperature=self.temperature,
            max_tokens=self.max_tokens,
            timeout=self.timeout,
            prompt_dialect=self.prompt_dialect,
            auth_token=self.auth_token,
            max_retries=self.max_retries,
            backoff_start=self.backoff_start,
            max_concurrent=self.max_concurrent,
        )
        return HttpLlmClient(spec)


@dataclass(frozen=True)
class EmbedderSection:
    kind: str = "local-hash"  # local-hash | http
    dimension: int = 64
    base_url: str = ""
    model: str = ""

    def build(self):
        if self.kind == "local-hash":
            return HashEmbedder(dimension=self.dimension)
        if self.kind == "http":
            if not self.base_url or not self.model:
                raise ConfigurationError("http embedder requires base_url and model")
            return HttpEmbedder(self.base_url, self.model, self.dimension)
        raise ConfigurationError(f"unknown embedder kind {self.kind!r}")


@dataclass(frozen=True)
class ServerSection:
    host: str = "127.0.0.1"
    port: int = 8800
    session_ttl_seconds: float = 3600.0


@dataclass(frozen=True)
class EvalSection:
    ground_truth: str = ""
    output_dir: str = "eval-out"
    iterations: int = 3
    kinds: tuple[str, ...] = ("tfidf", "bm25", "embedding", "ensemble")


@dataclass(frozen=True)
class IngestSection:
    messages_csv: str = ""
    replies_csv: str = ""
    pages_path: str = ""
    documents_out: str = "documents.jsonl"
    roster_names: tuple[str, ...] = ()
    roster_emails: tuple[str, ...] = ()


@dataclass(frozen=True)
class AppConfig:
    store_path: str = "store"
    default_retriever: RetrieverKind = RetrieverKind.ENSEMBLE
    chunking: ChunkingConfig = field(default_factory=ChunkingConfig)
    retrieval: RetrievalConfig = field(default_factory=RetrievalConfig)
    llm: LlmSection = field(default_factory=LlmSection)
    rewrite_llm: LlmSection | None = None
    embedder: EmbedderSection = field(default_factory=EmbedderSection)
    server: ServerSection = field(default_factory=ServerSection)
    eval: EvalSection = field(default_factory=EvalSection)
    ingest: IngestSection = field(default_factory=IngestSection)

    def build_llm(self):
        return self.llm.build()

    def build_rewrite_llm(self):
        """The separate rewrite endpoint when configured, else None (share the main one)."""
        return self.rewrite_llm.build() if self.rewrite_llm else None

    def build_embedder(self):
        return self.embedder.build()


def _section(data: dict, name: str) -> dict:
    value = data.get(name, {})
    if not isinstance(value, dict):
        raise ConfigurationError(f"config section [{name}] must be a table")
    return value


def _llm_section(raw: dict) -> LlmSection:
    base_url = os.environ.get(ENV_LLM_BASE_URL) or raw.get("base_url", LlmSection.base_url)
    auth_token = os.environ.get(ENV_LLM_AUTH_TOKEN) or raw.get("auth_token", "")
    return LlmSection(
        backend=raw.get("backend", "http"),
        base_url=base_url,
        model_name=raw.get("model_name", LlmSection.model_name),
        temperature=raw.get("temperature", LlmSection.temperature),
        max_tokens=raw.get("max_tokens", LlmSection.max_tokens),
        timeout=raw.get("timeout", LlmSection.timeout),
        prompt_dialect=raw.get("prompt_dialect", LlmSection.prompt_dialect),
        auth_token=auth_token,
        max_retries=raw.get("max_retries", LlmSection.max_retries),
        backoff_start=raw.get("backoff_start", LlmSection.backoff_start),
        max_concurrent=raw.get("max_concurrent", LlmSection.max_concurrent),
        script_path=raw.get("script_path", ""),
    )


def load_config(path: str | Path) -> AppConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid TOML: {exc}") from exc

    chunking_raw = _section(data, "chunking")
    retrieval_raw = _section(data, "retrieval")
    server_raw = _section(data, "server")
    eval_raw = _section(data, "eval")
    ingest_raw = _section(data, "ingest")
    embedder_raw = _section(data, "embedder")

    try:
        chunking = ChunkingConfig(
            chunk_size=chunking_raw.get("chunk_size", 800),
            overlap=chunking_raw.get("overlap", 200),
        )
        retrieval = RetrievalConfig(
            k=retrieval_raw.get("k", 3),
            similarity_threshold=retrieval_raw.get("similarity_threshold", 0.7),
            candidate_pool=retrieval_raw.get("candidate_pool", 20),
            bm25_k1=retrieval_raw.get("bm25_k1", 1.2),
            bm25_b=retrieval_raw.get("bm25_b", 0.75),
            compression_enabled=retrieval_raw.get("compression_enabled", False),
            reorder_enabled=retrieval_raw.get("reorder_enabled", True),
        )
        default_retriever = RetrieverKind(retrieval_raw.get("default_kind", "ensemble"))
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc

    rewrite_llm = _llm_section(_section(data, "rewrite_llm")) if "rewrite_llm" in data else None

    return AppConfig(
        store_path=data.get("store", {}).get("path", "store"),
        default_retriever=default_retriever,
        chunking=chunking,
        retrieval=retrieval,
        llm=_llm_section(_section(data, "llm")),
        rewrite_llm=rewrite_llm,
        embedder=EmbedderSection(
            kind=embedder_raw.get("kind", "local-hash"),
            dimension=embedder_raw.get("dimension", 64),
            base_url=embedder_raw.get("base_url", ""),
            model=embedder_raw.get("model", ""),
        ),
        server=ServerSection(
            host=server_raw.get("host", "127.0.0.1"),
            port=server_raw.get("port", 8800),
            session_ttl_seconds=server_raw.get("session_ttl_seconds", 3600.0),
        ),
        eval=EvalSection(
            ground_truth=eval_raw.get("ground_truth", ""),
            output_dir=eval_raw.get("output_dir", "eval-out"),
            iterations=eval_raw.get("iterations", 3),
            kinds=tuple(eval_raw.get("kinds", ["tfidf", "bm25", "embedding", "ensemble"])),
        ),
        ingest=IngestSection(
            messages_csv=ingest_raw.get("messages_csv", ""),
            replies_csv=ingest_raw.get("replies_csv", ""),
            pages_path=ingest_raw.get("pages_path", ""),
            documents_out=ingest_raw.get("documents_out", "documents.jsonl"),
            roster_names=tuple(ingest_raw.get("roster_names", [])),
            roster_emails=tuple(ingest_raw.get("roster_emails", [])),
        ),
    )
