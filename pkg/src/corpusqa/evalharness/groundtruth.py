"""Ground-truth QA pairs with their supporting context items.

Human correctness grades are carried as data when present; grading itself
is a human activity and never computed here. The ``notes`` field is free
text, conventionally one of the root-cause labels when an answer was graded
below correct.
"""

import json
from dataclasses import dataclass
from pathlib import Path

from corpusqa.corpus.store import VectorStore
from corpusqa.errors import GroundTruthError

HUMAN_GRADES = (
    "correct",
    "partially_correct_incomplete",
    "partially_correct_extraneous",
    "partially_correct_both",
    "incorrect",
)

# Root causes observed when answers go wrong; available for the notes field.
ERROR_CAUSES = (
    "hallucination",
    "context_not_retrieved",
    "wrong_context_used",
    "generic_answer",
    "refused_to_answer",
)


@dataclass(frozen=True)
class GroundTruthEntry:
    id: str
    question: str
    reference_answer: str
    supporting_item_ids: frozenset[str]
    human_grade: str | None = None
    notes: str = ""

    def __post_init__(self):
        if not self.id:
            raise GroundTruthError("entry id must be non-empty")
        if not self.question or not self.reference_answer:
            raise GroundTruthError(f"entry {self.id!r}: question and reference answer are required")
        if not self.supporting_item_ids:
            raise GroundTruthError(f"entry {self.id!r}: supporting_item_ids must be non-empty")
        if self.human_grade is not None and self.human_grade not in HUMAN_GRADES:
            raise GroundTruthError(f"entry {self.id!r}: unknown human_grade {self.human_grade!r}")


def load_ground_truth(path: str | Path) -> list[GroundTruthEntry]:
    """Read a JSON-lines dataset; duplicate ids and malformed lines are errors."""
    entries: list[GroundTruthEntry] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
                entry = GroundTruthEntry(
                    id=str(data["id"]),
                    question=data["question"],
                    reference_answer=data["reference_answer"],
                    supporting_item_ids=frozenset(data["supporting_item_ids"]),
                    human_grade=data.get("human_grade"),
                    notes=data.get("notes", ""),
                )
            except GroundTruthError as exc:
                raise GroundTruthError(f"line {line_no}: {exc}") from exc
            except (ValueError, KeyError, TypeError) as exc:
                raise GroundTruthError(f"line {line_no}: malformed entry: {exc}") from exc
            if entry.id in seen:
                raise GroundTruthError(f"line {line_no}: duplicate entry id {entry.id!r}")
            seen.add(entry.id)
            entries.append(entry)
    return entries


def validate_supporting_ids(entries: list[GroundTruthEntry], store: VectorStore) -> None:
    """Every supporting item must exist in the store being evaluated."""
    missing = sorted(
        item_id
        for entry in entries
        for item_id in entry.supporting_item_ids
        if item_id not in store.records
    )
    if missing:
        raise GroundTruthError(f"supporting item ids not present in store: {', '.join(missing)}")
