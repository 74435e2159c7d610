"""Roster-driven removal of personal information.

Scrubbing is deterministic: the same roster applied to the same text always
produces the same output, and scrubbing an already-scrubbed text is a no-op.
"""

import re
from dataclasses import dataclass, field

EMAIL_TOKEN = "[EMAIL]"

_GENERIC_EMAIL = re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}")


@dataclass(frozen=True)
class PiiRoster:
    """Known employee names and addresses plus their stable placeholders."""

    names: frozenset[str] = frozenset()
    emails: frozenset[str] = frozenset()
    placeholders: dict[str, str] = field(default_factory=dict)

    @classmethod
    def build(cls, names=(), emails=()) -> "PiiRoster":
        """Assign [PERSON_n] placeholders in sorted-name order."""
        ordered = sorted(n for n in names if n)
        placeholders = {name: f"[PERSON_{i + 1}]" for i, name in enumerate(ordered)}
        return cls(
            names=frozenset(ordered),
            emails=frozenset(e for e in emails if e),
            placeholders=placeholders,
        )


def scrub_pii(text: str, roster: PiiRoster) -> str:
    """Replace roster names with placeholders and any email with [EMAIL]."""
    out = text
    # Longest names first so "Jane Doe" wins over a bare "Jane" entry.
    for name in sorted(roster.names, key=len, reverse=True):
        placeholder = roster.placeholders.get(name, "[PERSON]")
        out = out.replace(name, placeholder)
    for email in sorted(roster.emails, key=len, reverse=True):
        out = out.replace(email, EMAIL_TOKEN)
    return _GENERIC_EMAIL.sub(EMAIL_TOKEN, out)
