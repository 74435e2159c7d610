"""Command-line interface: ingest, index, ask, chat, eval, serve."""

import argparse
import json
import sys
import uuid
from pathlib import Path

from corpusqa.corpus.chunking import split_confluence, split_teams
from corpusqa.corpus.store import build_store, load_current, write_generation
from corpusqa.dialogue.chat import chat_turn
from corpusqa.dialogue.session import ChatSession
from corpusqa.errors import CorpusQaError
from corpusqa.evalharness.groundtruth import load_ground_truth
from corpusqa.evalharness.report import render_report
from corpusqa.evalharness.runner import run_eval
from corpusqa.ingest.pii import PiiRoster
from corpusqa.ingest.tables import parse_messages_table, parse_replies_table
from corpusqa.ingest.threads import load_pages, reconcile_threads, render_page, render_thread
from corpusqa.retrieval.pipeline import RetrievalConfig, RetrieverKind
from corpusqa.service.config import AppConfig, load_config


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # The default argparse exit code is 2; user errors here exit 1.
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage()}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="corpusqa", description="Retrieval-augmented QA over chat threads and wiki pages")
    parser.add_argument("--config", default="config.toml", help="path to the TOML config file")
    parser.add_argument("--retriever", choices=[k.value for k in RetrieverKind], help="override the default retriever")
    parser.add_argument("--k", type=int, help="override retrieval k")
    parser.add_argument("--threshold", type=float, help="override the similarity threshold")
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="parse exports into rendered plain-text documents")
    ingest.add_argument("--messages", help="messages CSV path (default from config)")
    ingest.add_argument("--replies", help="replies CSV path (default from config)")
    ingest.add_argument("--pages", help="pages directory or JSON file (default from config)")
    ingest.add_argument("--out", help="output documents.jsonl path (default from config)")

    index = sub.add_parser("index", help="chunk and embed documents into a new store generation")
    index.add_argument("--docs", help="documents.jsonl produced by ingest (default from config)")

    ask = sub.add_parser("ask", help="answer a single question")
    ask.add_argument("question")

    sub.add_parser("chat", help="interactive chat loop")

    eval_cmd = sub.add_parser("eval", help="run the retriever evaluation")
    eval_cmd.add_argument("--ground-truth", help="ground truth JSONL (default from config)")
    eval_cmd.add_argument("--iterations", type=int, help="evaluation iterations (default from config)")
    eval_cmd.add_argument("--out-dir", help="report output directory (default from config)")

    sub.add_parser("serve", help="start the HTTP API")
    return parser


def _effective_retrieval(config: AppConfig, args) -> RetrievalConfig:
    cfg = config.retrieval
    changes = {}
    if args.k is not None:
        changes["k"] = args.k
    if args.threshold is not None:
        changes["similarity_threshold"] = args.threshold
    if not changes:
        return cfg
    from dataclasses import replace

    return replace(cfg, **changes)


def _effective_kind(config: AppConfig, args) -> RetrieverKind:
    return RetrieverKind(args.retriever) if args.retriever else config.default_retriever


def _cmd_ingest(config: AppConfig, args) -> int:
    messages_path = args.messages or config.ingest.messages_csv
    replies_path = args.replies or config.ingest.replies_csv
    pages_path = args.pages or config.ingest.pages_path
    out_path = args.out or config.ingest.documents_out
    if not messages_path and not pages_path:
        raise UsageError("nothing to ingest: provide --messages and/or --pages (or set them in config)")

    roster = PiiRoster.build(config.ingest.roster_names, config.ingest.roster_emails)
    documents = []

    if messages_path:
        messages = parse_messages_table(Path(messages_path).read_bytes())
        replies = (
            parse_replies_table(Path(replies_path).read_bytes())
            if replies_path
            else None
        )
        for err in messages.errors + (replies.errors if replies else []):
            print(f"warning: line {err.line}: {err.message}", file=sys.stderr)
        threads, orphans = reconcile_threads(messages.records, replies.records if replies else [], roster)
        if orphans:
            print(f"warning: {len(orphans)} orphan replies (no matching parent): {', '.join(orphans)}", file=sys.stderr)
        for thread in threads:
            text = render_thread(thread)
            documents.append(
                {"kind": "thread", "source_id": thread.source_id, "channel_id": thread.channel_id, "text": text}
            )
        print(f"ingested {len(threads)} threads ({sum(len(t.replies) for t in threads)} replies attached)")

    if pages_path:
        pages = load_pages(pages_path, roster)
        for page in pages:
            documents.append(
                {
                    "kind": "page",
                    "source_id": page.source_id,
                    "title": page.title,
                    "body": page.body,
                    "text": render_page(page),
                }
            )
        print(f"ingested {len(pages)} pages")

    with open(out_path, "w", encoding="utf-8") as fh:
        for doc in documents:
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")
    print(f"wrote {len(documents)} documents to {out_path}")
    return 0


def _cmd_index(config: AppConfig, args) -> int:
    docs_path = args.docs or config.ingest.documents_out
    items = []
    with open(docs_path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            doc = json.loads(line)
            if doc["kind"] == "thread":
                items.extend(split_teams(doc["text"], doc["source_id"]))
            else:
                items.extend(split_confluence(doc["body"], doc["title"], config.chunking, doc["source_id"]))
    embedder = config.build_embedder()
    store = build_store(items, embedder)
    generation = write_generation(store, config.store_path)
    print(f"indexed {store.manifest.item_count} context items into {config.store_path}/{generation}")
    return 0


def _cmd_ask(config: AppConfig, args) -> int:
    store, _ = load_current(config.store_path)
    trace = chat_turn(
        ChatSession(id=uuid.uuid4().hex),
        args.question,
        _effective_kind(config, args),
        store,
        _effective_retrieval(config, args),
        config.build_embedder(),
        config.build_llm(),
        rewrite_llm=config.build_rewrite_llm(),
    )
    print(trace.answer)
    print(f"[trace {trace.trace_id}]", file=sys.stderr)
    return 2 if trace.generation_failed else 0


def _cmd_chat(config: AppConfig, args) -> int:
    store, _ = load_current(config.store_path)
    embedder = config.build_embedder()
    llm = config.build_llm()
    rewrite_llm = config.build_rewrite_llm()
    cfg = _effective_retrieval(config, args)
    kind = _effective_kind(config, args)
    session = ChatSession(id=uuid.uuid4().hex)
    print("corpusqa chat - empty line or Ctrl-D to quit")
    while True:
        try:
            question = input("> ").strip()
        except EOFError:
            break
        if not question:
            break
        trace = chat_turn(session, question, kind, store, cfg, embedder, llm, rewrite_llm=rewrite_llm)
        print(trace.answer)
    return 0


def _cmd_eval(config: AppConfig, args) -> int:
    ground_truth_path = args.ground_truth or config.eval.ground_truth
    if not ground_truth_path:
        raise UsageError("no ground-truth dataset: pass --ground-truth or set [eval].ground_truth")
    out_dir = Path(args.out_dir or config.eval.output_dir)
    iterations = args.iterations or config.eval.iterations
    kinds = [RetrieverKind(args.retriever)] if args.retriever else [RetrieverKind(k) for k in config.eval.kinds]

    store, _ = load_current(config.store_path)
    entries = load_ground_truth(ground_truth_path)
    report, records = run_eval(
        entries,
        kinds,
        iterations,
        store=store,
        cfg=_effective_retrieval(config, args),
        embedder=config.build_embedder(),
        llm=config.build_llm(),
        rewrite_llm=config.build_rewrite_llm(),
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, fmt in (("report.md", "markdown"), ("report.json", "json"), ("times.csv", "csv")):
        (out_dir / name).write_bytes(render_report(report, records, fmt))
        print(f"wrote {out_dir / name}")
    for kind in kinds:
        agg = report.kinds[kind.value]
        print(
            f"{kind.value}: Recall@{report.k} {agg.recall_at_k:.2f}%, "
            f"answer similarity {agg.mean_answer_similarity:.2f}%, "
            f"median time {agg.response_time_median:.3f}s"
        )
    return 0


def _cmd_serve(config: AppConfig, args) -> int:
    import uvicorn

    from corpusqa.service.app import build_state, create_app

    app = create_app(build_state(config))
    uvicorn.run(app, host=config.server.host, port=config.server.port)
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "index": _cmd_index,
    "ask": _cmd_ask,
    "chat": _cmd_chat,
    "eval": _cmd_eval,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = load_config(args.config)
        return _COMMANDS[args.command](config, args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (CorpusQaError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 1
    except Exception as exc:  # internal failure, distinct exit code
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
