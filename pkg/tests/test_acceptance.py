"""Acceptance suite: one test per release criterion, at the stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to get one line per
criterion (the explicit PASS prints plus pytest's own verdict lines).
"""

import hashlib
import threading
import time

import pytest
from hypothesis import given, settings, strategies as st

from conftest import FIXED_TIME, store_from_texts
from corpora import ORACLE_CORPORA, TOY3
from corpusqa.corpus.chunking import ChunkingConfig, chunk_token_windows, split_confluence
from corpusqa.corpus.embedding import HashEmbedder, cosine
from corpusqa.corpus.store import StoreHandle, load_current, write_generation
from corpusqa.corpus.tokenizer import tokenize
from corpusqa.dialogue.chat import chat_turn
from corpusqa.dialogue.llm import HttpLlmClient, LlmEndpointSpec
from corpusqa.dialogue.session import ChatSession
from corpusqa.evalharness.metrics import recall_at_k
from corpusqa.evalharness.report import render_report
from corpusqa.evalharness.runner import run_eval
from corpusqa.retrieval.pipeline import RetrievalConfig, RetrieverKind, reorder_lost_in_middle, retrieve
from corpusqa.retrieval.scorers import bm25_scores, embedding_scores, tfidf_scores
from oracles import oracle_bm25, oracle_cosine, oracle_ensemble, oracle_tfidf

CFG = RetrievalConfig(k=3, similarity_threshold=0.0, candidate_pool=20)


def _passed(name: str) -> None:
    print(f"\nACCEPTANCE PASS: {name}")


def _ranking(scores):
    return [i for i, _ in sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))]


# --- criterion: BM25 oracle equivalence ------------------------------------

def test_bm25_oracle_equivalence(embedder):
    started = time.perf_counter()
    checked = 0
    for docs, queries in ORACLE_CORPORA.values():
        assert len(docs) <= 10
        store = store_from_texts(docs, embedder)
        for query in queries:
            expected = oracle_bm25(query, docs, k1=CFG.bm25_k1, b=CFG.bm25_b)
            actual = bm25_scores(query, store, CFG)
            assert actual.keys() == expected.keys()
            for item_id, value in expected.items():
                assert abs(actual[item_id] - value) <= 1e-9
                checked += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"oracle comparison took {elapsed:.3f}s"
    assert checked >= 80
    _passed(f"BM25 oracle equivalence ({checked} scores, {elapsed * 1000:.0f} ms)")


# --- criterion: TF-IDF oracle equivalence -----------------------------------

def test_tfidf_oracle_equivalence(embedder):
    # Frozen hand-computed table for the three-document toy corpus.
    store = store_from_texts(TOY3, embedder)
    scores = tfidf_scores("cluster migrate", store)
    assert abs(scores["d1"] - 4.268511325463507) <= 1e-9
    assert abs(scores["d2"] - 1.2876820724517809) <= 1e-9
    assert scores["d3"] == 0.0

    checked = 0
    for docs, queries in ORACLE_CORPORA.values():
        store = store_from_texts(docs, embedder)
        for query in queries:
            expected = oracle_tfidf(query, docs)
            actual = tfidf_scores(query, store)
            assert actual.keys() == expected.keys()
            for item_id, value in expected.items():
                assert abs(actual[item_id] - value) <= 1e-9
                checked += 1
    _passed(f"TF-IDF oracle equivalence ({checked} scores)")


# --- criterion: ensemble sanity on the split fixture ------------------------

def _bucket(token: str, dim: int = 64) -> int:
    return int.from_bytes(hashlib.sha256(token.encode("utf-8")).digest()[:8], "big") % dim


def _collision_proxies(tokens, used):
    """For each token, a distinct unused word hashing to the same bucket."""
    proxies = []
    for token in tokens:
        want = _bucket(token)
        for j in range(100000):
            candidate = f"primer{j}"
            if candidate in used or candidate in proxies:
                continue
            if _bucket(candidate) == want:
                proxies.append(candidate)
                break
        else:
            raise AssertionError(f"no collision found for {token}")
    return proxies


def test_ensemble_sanity_split_fixture(embedder):
    # Every filler repeats the query's common words so their idf collapses;
    # the BM25 target owns a rare term, the embedding target is reachable
    # only through hash-bucket collisions.
    embed_tokens = [f"uniq{i}word" for i in range(8)]
    docs = {
        "item-a": "how do i restart the runner today",
        "item-b": "how do i check the logs quickly",
        "item-c": "how do i find the main dashboard",
        "item-d": "how do i tune the gateway service",
        "item-e": "how do i read the release calendar",
        "item-f": "how do i run the test matrix",
        "item-g": "how do i join the standup call",
        "item-flarnix": (
            "rotating flarnix credentials: open the vault console, export the "
            "flarnix keypair, revoke stale grants, and notify the owners before "
            "the flarnix expiry window closes"
        ),
        "item-zz-embed": " ".join(embed_tokens),
    }
    used = {t for text in docs.values() for t in tokenize(text.lower())}
    query_a = "how do i rotate the flarnix credentials"
    query_b = " ".join(_collision_proxies(embed_tokens, used))
    store = store_from_texts(docs, embedder)

    # Construction checks: each planted answer is reachable by exactly one
    # constituent. Query A's target wins on the rare term but ranks outside
    # the embedding top 3; query B's target is a bucket-for-bucket collision
    # (cosine 1.0) that shares no term with the corpus.
    bm25_a = _ranking(bm25_scores(query_a, store, CFG))
    embed_a = _ranking(embedding_scores(query_a, store, embedder))
    assert bm25_a[0] == "item-flarnix"
    assert "item-flarnix" not in embed_a[:3]

    bm25_b = _ranking(bm25_scores(query_b, store, CFG))
    embed_b = _ranking(embedding_scores(query_b, store, embedder))
    assert embed_b[0] == "item-zz-embed"
    assert cosine(embedder.embed(query_b), list(store.records["item-zz-embed"].vector)) == pytest.approx(1.0, abs=1e-12)
    assert "item-zz-embed" not in bm25_b[:3]

    # Hand-computed expectation via the independent oracle chain.
    for query, target in ((query_a, "item-flarnix"), (query_b, "item-zz-embed")):
        fused = oracle_ensemble(
            oracle_bm25(query, docs, k1=CFG.bm25_k1, b=CFG.bm25_b),
            {i: oracle_cosine(embedder.embed(query), list(store.records[i].vector)) for i in docs},
            CFG.candidate_pool,
        )
        assert target in _ranking(fused)[:3]

    def recall(kind):
        hits = 0
        for query, target in ((query_a, "item-flarnix"), (query_b, "item-zz-embed")):
            result = retrieve(query, kind, store, CFG, embedder)
            hits += any(si.item.id == target for si in result.selected)
        return 100.0 * hits / 2

    r_bm25 = recall(RetrieverKind.BM25)
    r_embed = recall(RetrieverKind.EMBEDDING)
    r_ensemble = recall(RetrieverKind.ENSEMBLE)
    assert r_bm25 == 50.0
    assert r_embed == 50.0
    assert r_ensemble >= max(r_bm25, r_embed)
    assert r_ensemble == 100.0
    _passed(f"ensemble sanity (bm25 {r_bm25:.0f}%, embedding {r_embed:.0f}%, ensemble {r_ensemble:.0f}%)")


# --- criterion: chunking exactness -------------------------------------------

def test_chunking_exactness():
    cfg = ChunkingConfig(chunk_size=800, overlap=200)
    for n in (500, 800, 1800, 5000):
        doc = " ".join(f"w{i:05d}" for i in range(n))
        source = tokenize(doc)
        items = split_confluence(doc, "Guide", cfg, "p")

        # Spans must follow start = 600 * i exactly.
        expected_windows = []
        start = 0
        while True:
            end = min(start + 800, n)
            expected_windows.append((start, end))
            if end >= n:
                break
            start += 600
        assert chunk_token_windows(n, cfg) == expected_windows
        assert len(items) == len(expected_windows)

        bodies = [tokenize(item.text.split("\n", 1)[1]) for item in items]
        for body, (start, end) in zip(bodies, expected_windows):
            assert body == source[start:end]
        for left, right in zip(bodies, bodies[1:]):
            assert left[-200:] == right[:200]
        reconstructed = list(bodies[0])
        for body in bodies[1:]:
            reconstructed.extend(body[200:])
        assert reconstructed == source
    _passed("chunking exactness (500/800/1800/5000 tokens, stride 600)")


# --- criterion: threshold behavior --------------------------------------------

def test_threshold_behavior(embedder):
    docs = {
        "t1": "alpha beta gamma delta",
        "t2": "alpha beta gamma delta zeta",
        "t3": "alpha mention inside lots of unrelated words one two three four five six seven",
        "t4": "completely offtopic text about nothing specific",
    }
    query = "alpha beta gamma delta"
    store = store_from_texts(docs, embedder)
    qv = embedder.embed(query)
    sims = {i: cosine(qv, list(store.records[i].vector)) for i in docs}
    assert sims["t1"] > 0.7 and sims["t2"] > 0.7
    assert sims["t3"] <= 0.7 and sims["t4"] <= 0.7

    cfg = RetrievalConfig(k=3, similarity_threshold=0.7)
    for kind in RetrieverKind:
        result = retrieve(query, kind, store, cfg, embedder)
        assert {si.item.id for si in result.selected} == {"t1", "t2"}, kind
        assert result.dropped_below_threshold == 1, kind
    _passed("threshold behavior (2 of top-3 above 0.7 for all four kinds)")


# --- criterion: planted-answer end-to-end --------------------------------------

def test_planted_answer_end_to_end(planted, embedder):
    started = time.perf_counter()
    assert planted.store.manifest.item_count == 50
    assert len(planted.entries) == 20

    recalls = {}
    contained = 0
    for kind in (RetrieverKind.BM25, RetrieverKind.ENSEMBLE):
        report, records = run_eval(
            planted.entries,
            [kind],
            iterations=1,
            store=planted.store,
            cfg=planted.cfg,
            embedder=embedder,
            llm=planted.llm,
        )
        recalls[kind.value] = report.kinds[kind.value].recall_at_k
        if kind is RetrieverKind.ENSEMBLE:
            by_entry = {r.entry_id: r.generated_answer for r in records}
            contained = sum(
                1 for entry, fact in zip(planted.entries, planted.facts) if fact in by_entry[entry.id]
            )

    assert recalls["bm25"] == 100.0
    assert recalls["ensemble"] == 100.0
    assert contained >= 19

    # Determinism: the same single turn twice is byte-stable.
    def one_answer():
        return chat_turn(
            ChatSession(id="x"),
            planted.entries[0].question,
            RetrieverKind.ENSEMBLE,
            planted.store,
            planted.cfg,
            embedder,
            planted.llm,
        ).answer

    assert one_answer() == one_answer()

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"end-to-end fixture took {elapsed:.1f}s"
    _passed(
        f"planted-answer end-to-end (recall 100%, facts {contained}/20, {elapsed:.1f}s, no network)"
    )


# --- criterion: evaluation protocol fidelity ------------------------------------

def test_evaluation_protocol_fidelity(planted, embedder):
    kinds = list(RetrieverKind)
    report, records = run_eval(
        planted.entries,
        kinds,
        iterations=3,
        store=planted.store,
        cfg=planted.cfg,
        embedder=embedder,
        llm=planted.llm,
        created_at=FIXED_TIME,
    )

    # Table-shaped markdown: 2 metric rows x 4 retriever columns.
    text = render_report(report, records, "markdown").decode()
    header = next(line for line in text.splitlines() if line.startswith("| Metric"))
    assert header.split("|")[2:-1] == [" TF-IDF ", " BM25 ", " Embedding ", " Ensemble "]
    metric_rows = [line for line in text.splitlines() if line.startswith(("| Recall@3 ", "| Answer Similarity "))]
    assert len(metric_rows) == 2
    for row in metric_rows:
        assert len(row.split("|")) == 7  # blank, metric, 4 kinds, blank

    csv_lines = render_report(report, records, "csv").decode().splitlines()
    assert len(csv_lines) - 1 == len(planted.entries) * 3

    # Zero cross-iteration variance under deterministic components.
    for kind in kinds:
        kind_records = [r for r in records if r.retriever_kind == kind.value]
        recalls = {
            it: recall_at_k([r for r in kind_records if r.iteration == it], planted.entries, 3)
            for it in (1, 2, 3)
        }
        similarities = {
            it: sorted((r.entry_id, r.answer_similarity) for r in kind_records if r.iteration == it)
            for it in (1, 2, 3)
        }
        assert recalls[1] == recalls[2] == recalls[3]
        assert similarities[1] == similarities[2] == similarities[3]
    _passed("evaluation protocol fidelity (3 iterations x 4 kinds, zero variance)")


# --- criterion: reordering law ----------------------------------------------------

def test_reordering_law():
    expected = {
        1: [1],
        2: [1, 2],
        3: [1, 3, 2],
        4: [1, 3, 4, 2],
        5: [1, 3, 5, 4, 2],
        6: [1, 3, 5, 6, 4, 2],
        7: [1, 3, 5, 7, 6, 4, 2],
    }
    for n, want in expected.items():
        ranks = list(range(1, n + 1))
        assert reorder_lost_in_middle(ranks) == want, n

    @settings(max_examples=1000, deadline=None)
    @given(st.lists(st.integers()))
    def permutation_property(items):
        out = reorder_lost_in_middle(items)
        assert sorted(out) == sorted(items)

    permutation_property()
    _passed("reordering law (positional formula n=1..7, 1000 permutation cases)")


# --- criterion: fail-open rewriting -------------------------------------------------

def test_fail_open_rewriting(planted, embedder):
    down = HttpLlmClient(
        LlmEndpointSpec(base_url="http://127.0.0.1:9", model_name="m", timeout=0.2, max_retries=1),
        sleep=lambda s: None,
    )
    for entry in planted.entries:
        trace = chat_turn(
            ChatSession(id=f"s-{entry.id}"),
            entry.question,
            RetrieverKind.BM25,
            planted.store,
            planted.cfg,
            embedder,
            down,
        )
        assert trace is not None
        assert trace.rewrite.was_rewritten is False
        assert trace.rewrite.enhanced_query == entry.question
        assert trace.answer
    _passed("fail-open rewriting (20/20 queries answered with LLM endpoint down)")


# --- criterion: store lifecycle ------------------------------------------------------

def test_store_lifecycle(tmp_path, planted, embedder):
    generation = write_generation(planted.store, tmp_path)
    loaded, current = load_current(tmp_path)
    assert current == generation
    assert loaded == planted.store

    new_store = store_from_texts({f"n{i}": f"replacement item {i}" for i in range(25)}, embedder)
    handle = StoreHandle(loaded, generation)
    failures = []
    completed = []
    barrier = threading.Barrier(101)

    def reader(idx):
        barrier.wait()
        for _ in range(40):
            store, gen = handle.get()
            try:
                assert len(store.records) == store.manifest.item_count
                assert gen in (generation, "gen-next")
                scores = tfidf_scores("replacement item", store)
                assert len(scores) == store.manifest.item_count
            except Exception as exc:  # count, do not raise across threads
                failures.append((idx, exc))
                return
        completed.append(idx)

    threads = [threading.Thread(target=reader, args=(i,)) for i in range(100)]
    for t in threads:
        t.start()
    barrier.wait()
    handle.swap(new_store, "gen-next")
    for t in threads:
        t.join(timeout=30)

    assert failures == []
    assert len(completed) == 100
    _passed("store lifecycle (round-trip equality; swap under 100 readers, zero losses)")
