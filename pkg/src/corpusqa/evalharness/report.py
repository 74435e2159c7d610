"""Report rendering: markdown grid, per-question times CSV, full JSON."""

import csv
import io
import json

from corpusqa.evalharness.runner import EvalRecord, EvalReport, KindAggregate

_KIND_LABELS = {"tfidf": "TF-IDF", "bm25": "BM25", "embedding": "Embedding", "ensemble": "Ensemble"}


def _label(kind: str) -> str:
    return _KIND_LABELS.get(kind, kind)


def _render_markdown(report: EvalReport) -> bytes:
    kinds = list(report.kinds)
    lines = [
        f"# Retriever evaluation ({report.iterations} iterations, k={report.k})",
        "",
        f"Generated: {report.timestamp}",
        "",
        "| Metric | " + " | ".join(_label(k) for k in kinds) + " |",
        "|" + "---|" * (len(kinds) + 1),
        f"| Recall@{report.k} | "
        + " | ".join(f"{report.kinds[k].recall_at_k:.2f}%" for k in kinds)
        + " |",
        "| Answer Similarity | "
        + " | ".join(f"{report.kinds[k].mean_answer_similarity:.2f}%" for k in kinds)
        + " |",
        "",
        "## Response times (seconds)",
        "",
        "| Statistic | " + " | ".join(_label(k) for k in kinds) + " |",
        "|" + "---|" * (len(kinds) + 1),
        "| Mean | " + " | ".join(f"{report.kinds[k].response_time_mean:.3f}" for k in kinds) + " |",
        "| Median | " + " | ".join(f"{report.kinds[k].response_time_median:.3f}" for k in kinds) + " |",
        "| Q1 | " + " | ".join(f"{report.kinds[k].response_time_q1:.3f}" for k in kinds) + " |",
        "| Q3 | " + " | ".join(f"{report.kinds[k].response_time_q3:.3f}" for k in kinds) + " |",
        "",
    ]
    return "\n".join(lines).encode("utf-8")


def _render_times_csv(report: EvalReport, records: list[EvalRecord]) -> bytes:
    """One row per (question, iteration), one response-time column per kind,
    ready for boxplotting."""
    kinds = list(report.kinds)
    times: dict[tuple[str, int], dict[str, float]] = {}
    entry_order: list[str] = []
    for record in records:
        if record.entry_id not in entry_order:
            entry_order.append(record.entry_id)
        times.setdefault((record.entry_id, record.iteration), {})[record.retriever_kind] = (
            record.response_time
        )
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["entry_id", "iteration", *kinds])
    for entry_id in entry_order:
        for iteration in range(1, report.iterations + 1):
            row_times = times.get((entry_id, iteration), {})
            writer.writerow(
                [entry_id, iteration, *[f"{row_times[k]:.6f}" if k in row_times else "" for k in kinds]]
            )
    return buffer.getvalue().encode("utf-8")


def _render_json(report: EvalReport, records: list[EvalRecord]) -> bytes:
    payload = {
        "report": {
            "kinds": {
                kind: {
                    "recall_at_k": agg.recall_at_k,
                    "mean_answer_similarity": agg.mean_answer_similarity,
                    "response_time_mean": agg.response_time_mean,
                    "response_time_median": agg.response_time_median,
                    "response_time_q1": agg.response_time_q1,
                    "response_time_q3": agg.response_time_q3,
                }
                for kind, agg in report.kinds.items()
            },
            "iterations": report.iterations,
            "k": report.k,
            "timestamp": report.timestamp,
            "config": report.config,
        },
        "records": [
            {
                "entry_id": r.entry_id,
                "retriever_kind": r.retriever_kind,
                "iteration": r.iteration,
                "retrieved_ids": list(r.retrieved_ids),
                "generated_answer": r.generated_answer,
                "answer_similarity": r.answer_similarity,
                "response_time": r.response_time,
                "step_timings": r.step_timings,
                "generation_failed": r.generation_failed,
            }
            for r in records
        ],
    }
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def parse_report_json(data: bytes) -> tuple[EvalReport, list[EvalRecord]]:
    """Inverse of the JSON rendering; used for round-trip checks and tooling."""
    payload = json.loads(data.decode("utf-8"))
    rep = payload["report"]
    report = EvalReport(
        kinds={
            kind: KindAggregate(
                recall_at_k=agg["recall_at_k"],
                mean_answer_similarity=agg["mean_answer_similarity"],
                response_time_mean=agg["response_time_mean"],
                response_time_median=agg["response_time_median"],
                response_time_q1=agg["response_time_q1"],
                response_time_q3=agg["response_time_q3"],
            )
            for kind, agg in rep["kinds"].items()
        },
        iterations=rep["iterations"],
        k=rep["k"],
        timestamp=rep["timestamp"],
        config=rep["config"],
    )
    records = [
        EvalRecord(
            entry_id=r["entry_id"],
            retriever_kind=r["retriever_kind"],
            iteration=r["iteration"],
            retrieved_ids=tuple(r["retrieved_ids"]),
            generated_answer=r["generated_answer"],
            answer_similarity=r["answer_similarity"],
            response_time=r["response_time"],
            step_timings=r["step_timings"],
            generation_failed=r["generation_failed"],
        )
        for r in payload["records"]
    ]
    return report, records


def render_report(report: EvalReport, records: list[EvalRecord], format: str) -> bytes:
    if format == "markdown":
        return _render_markdown(report)
    if format == "csv":
        return _render_times_csv(report, records)
    if format == "json":
        return _render_json(report, records)
    raise ValueError(f"unknown report format {format!r}")
