"""Shared fixtures: deterministic embedder, toy stores, the planted-answer corpus."""

from dataclasses import dataclass

import pytest

from corpusqa.corpus.chunking import ChunkingConfig, ContextItem, split_confluence, split_teams
from corpusqa.corpus.embedding import HashEmbedder
from corpusqa.corpus.store import VectorStore, build_store
from corpusqa.corpus.tokenizer import count_tokens
from corpusqa.dialogue.llm import ScriptedLlm
from corpusqa.evalharness.groundtruth import GroundTruthEntry
from corpusqa.ingest.threads import PageDocument, ThreadDocument, render_thread
from corpusqa.retrieval.pipeline import RetrievalConfig

FIXED_TIME = "2026-08-01T00:00:00+00:00"


def make_item(item_id: str, text: str, source_kind: str = "teams", title: str = "") -> ContextItem:
    return ContextItem(
        id=item_id,
        text=text,
        source_kind=source_kind,
        title=title,
        chunk_index=0,
        chunk_count=1,
        token_count=count_tokens(text),
    )


def store_from_texts(texts: dict[str, str], embedder) -> VectorStore:
    items = [make_item(item_id, text) for item_id, text in texts.items()]
    return build_store(items, embedder, created_at=FIXED_TIME)


@pytest.fixture
def embedder():
    return HashEmbedder(dimension=64)


@pytest.fixture
def make_store(embedder):
    def _make(texts: dict[str, str]) -> VectorStore:
        return store_from_texts(texts, embedder)

    return _make


# ---------------------------------------------------------------------------
# Planted-answer corpus: 50 items (20 planted threads, 25 filler threads,
# 5 pages), 20 questions each keyed by a phrase that occurs in exactly one
# item. The scripted model answers each question with its planted fact.
# ---------------------------------------------------------------------------

_FILLER_SENTENCES = [
    "The nightly build finished in forty minutes after the cache change.",
    "Remember to bump the chart version before promoting to staging.",
    "The lint stage now runs in parallel with unit tests.",
    "Disk pressure on the runners was resolved by pruning old images.",
    "Use the shared pipeline template instead of copying stages.",
    "The artifact registry moved to the new region last week.",
    "Canary analysis flagged a latency regression in the gateway.",
    "Secrets are injected at deploy time, never baked into images.",
    "The smoke suite must pass before any production promotion.",
    "Rollback is automatic when the error budget burn is too fast.",
]

_PAGE_BODIES = [
    ("Runner maintenance", "Drain the runner pool before kernel upgrades. Re-enable nodes one by one and watch the queue depth. Escalate if jobs stay queued for more than ten minutes."),
    ("Release checklist", "Verify the changelog, confirm the staging soak has completed, and collect sign-off from the component owners before tagging."),
    ("Pipeline caching", "Caches are keyed by lockfile hash. A miss rebuilds the dependency layer, which adds roughly eight minutes to the job."),
    ("Incident response", "Page the on-call engineer, open a tracking channel, and freeze deployments until the incident commander lifts the freeze."),
    ("Access requests", "File an access ticket with the resource name and duration. Approvals above ninety days need a second reviewer."),
]


@dataclass(frozen=True)
class PlantedFixture:
    store: VectorStore
    entries: list[GroundTruthEntry]
    llm: ScriptedLlm
    cfg: RetrievalConfig
    phrases: list[str]
    facts: list[str]


def build_planted_fixture(embedder) -> PlantedFixture:
    items = []
    entries = []
    rules = []
    phrases = []
    facts = []

    for i in range(20):
        phrase = f"relic{i:02d}z"
        fact = (
            f"The {phrase} rollout requires approval from the release board "
            f"and a canary window of {i + 2} hours."
        )
        phrases.append(phrase)
        facts.append(fact)
        thread = ThreadDocument(
            message=f"We are enabling the {phrase} rollout next sprint. {fact}",
            replies=("Thanks, noted.", "I will update the runbook."),
            source_id=f"t{i:03d}",
            channel_id="chan-ci",
        )
        items.extend(split_teams(render_thread(thread), thread.source_id))
        entries.append(
            GroundTruthEntry(
                id=f"q{i:02d}",
                question=f"Tell me about the {phrase} rollout policy.",
                reference_answer=fact,
                supporting_item_ids=frozenset({f"t{i:03d}:0"}),
            )
        )
        rules.append((f"Tell me about the {phrase}", fact))

    for i in range(25):
        sentence = _FILLER_SENTENCES[i % len(_FILLER_SENTENCES)]
        thread = ThreadDocument(
            message=f"{sentence} (update {i})",
            replies=(f"Acknowledged by the {['infra', 'release', 'qa'][i % 3]} team.",),
            source_id=f"f{i:03d}",
            channel_id="chan-ci",
        )
        items.extend(split_teams(render_thread(thread), thread.source_id))

    chunk_cfg = ChunkingConfig(chunk_size=800, overlap=200)
    for i, (title, body) in enumerate(_PAGE_BODIES):
        page = PageDocument(title=title, body=body, source_id=f"p{i:03d}")
        items.extend(split_confluence(page.body, page.title, chunk_cfg, page.source_id))

    assert len(items) == 50
    store = build_store(items, embedder, created_at=FIXED_TIME)
    llm = ScriptedLlm(rules, default="I do not know.")
    cfg = RetrievalConfig(k=3, similarity_threshold=0.0, candidate_pool=20)
    return PlantedFixture(store=store, entries=entries, llm=llm, cfg=cfg, phrases=phrases, facts=facts)


@pytest.fixture(scope="session")
def planted():
    return build_planted_fixture(HashEmbedder(dimension=64))
