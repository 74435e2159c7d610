"""Query rewriting against the conversation history.

Rewriting is an enhancement, not a dependency: if the model call fails, the
original query is used verbatim and answering proceeds.
"""

from dataclasses import dataclass

from corpusqa.dialogue.llm import LlmClient
from corpusqa.dialogue.prompts import REWRITE_OUTPUT_MARKER, build_rewrite_prompt
from corpusqa.dialogue.session import ChatSession
from corpusqa.errors import CorpusQaError


@dataclass(frozen=True)
class RewriteOutcome:
    enhanced_query: str
    was_rewritten: bool
    raw_model_output: str


def parse_rewrite_output(model_output: str, original_query: str) -> RewriteOutcome:
    """Extract the text after the last output marker; anything else means
    the model declined and the original query stands."""
    idx = model_output.rfind(REWRITE_OUTPUT_MARKER)
    if idx < 0:
        return RewriteOutcome(original_query, False, model_output)
    extracted = model_output[idx + len(REWRITE_OUTPUT_MARKER) :].strip()
    if not extracted or extracted == original_query:
        return RewriteOutcome(original_query, False, model_output)
    return RewriteOutcome(extracted, True, model_output)


def rewrite_query(session: ChatSession, user_query: str, llm: LlmClient) -> RewriteOutcome:
    prompt = build_rewrite_prompt(
        user_query,
        session.recent_turns(),
        dialect=getattr(llm, "dialect", "plain"),
    )
    try:
        output = llm.complete(prompt)
    except CorpusQaError:
        return RewriteOutcome(user_query, False, "")
    return parse_rewrite_output(output, user_query)
