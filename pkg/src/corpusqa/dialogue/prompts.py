"""Prompt assembly for query rewriting and answer generation.

The instruction bodies live in editable text assets under ``templates/``;
this module wraps them in the selected prompt dialect and fills in history,
context items, and the question. Tests pin the required instruction
elements, so edits that drop one fail loudly.
"""

from importlib import resources

from corpusqa.dialogue.session import ChatTurn

NO_HISTORY_MARKER = "(no prior conversation)"
NO_CONTEXT_NOTICE = "No relevant documents were found for this query."
GROUNDING_GUARD = "Answer the query solely based on the retrieved documents."
REWRITE_OUTPUT_MARKER = "Question:"


def _load_template(name: str) -> str:
    return resources.files("corpusqa.dialogue").joinpath("templates", name).read_text(encoding="utf-8").strip()


def rewrite_system_text() -> str:
    return _load_template("rewrite_system.txt")


def answer_system_text() -> str:
    return _load_template("answer_system.txt")


def _wrap(system: str, body: str, dialect: str) -> str:
    if dialect == "llama2_inst":
        return f"<s>[INST] <<SYS>>\n{system}\n<</SYS>>\n\n{body} [/INST]"
    return f"{system}\n\n{body}"


def render_history(history: list[ChatTurn]) -> str:
    if not history:
        return NO_HISTORY_MARKER
    labels = {"user": "User", "assistant": "Assistant"}
    return "\n".join(f"{labels.get(turn.role, turn.role)}: {turn.text}" for turn in history)


def build_rewrite_prompt(query: str, history: list[ChatTurn], dialect: str = "llama2_inst") -> str:
    if not query:
        raise ValueError("query must be non-empty")
    body = (
        f"Conversation history:\n{render_history(history)}\n\n"
        f"Latest user query: {query}"
    )
    return _wrap(rewrite_system_text(), body, dialect)


def build_answer_prompt(enhanced_query: str, items, dialect: str = "llama2_inst") -> str:
    """Items appear in the order retrieval produced them (already reordered)."""
    if items:
        blocks = [
            f"--- Context item {i + 1} ---\n{scored.item.text}" for i, scored in enumerate(items)
        ]
        context = "\n".join(blocks)
    else:
        context = NO_CONTEXT_NOTICE
    body = f"Retrieved documents:\n{context}\n\nQuestion: {enhanced_query}"
    return _wrap(answer_system_text(), body, dialect)
