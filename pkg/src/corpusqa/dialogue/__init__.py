"""Conversational pipeline: rewrite, retrieve, prompt, generate."""

from corpusqa.dialogue.chat import (
    DEFAULT_FALLBACK_ANSWER,
    GENERATION_ERROR_NOTICE,
    AnswerTrace,
    chat_turn,
    generate_answer,
)
from corpusqa.dialogue.llm import HttpLlmClient, LlmClient, LlmEndpointSpec, ScriptedLlm
from corpusqa.dialogue.prompts import (
    GROUNDING_GUARD,
    NO_CONTEXT_NOTICE,
    NO_HISTORY_MARKER,
    build_answer_prompt,
    build_rewrite_prompt,
)
from corpusqa.dialogue.rewrite import RewriteOutcome, parse_rewrite_output, rewrite_query
from corpusqa.dialogue.session import ChatSession, ChatTurn

__all__ = [
    "DEFAULT_FALLBACK_ANSWER",
    "GENERATION_ERROR_NOTICE",
    "GROUNDING_GUARD",
    "NO_CONTEXT_NOTICE",
    "NO_HISTORY_MARKER",
    "AnswerTrace",
    "ChatSession",
    "ChatTurn",
    "HttpLlmClient",
    "LlmClient",
    "LlmEndpointSpec",
    "RewriteOutcome",
    "ScriptedLlm",
    "build_answer_prompt",
    "build_rewrite_prompt",
    "chat_turn",
    "generate_answer",
    "parse_rewrite_output",
    "rewrite_query",
]
