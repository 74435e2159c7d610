"""Retriever-comparison evaluation: dataset, metrics, runner, reports."""

from corpusqa.evalharness.groundtruth import (
    HUMAN_GRADES,
    GroundTruthEntry,
    load_ground_truth,
    validate_supporting_ids,
)
from corpusqa.evalharness.metrics import answer_similarity, recall_at_k
from corpusqa.evalharness.report import parse_report_json, render_report
from corpusqa.evalharness.runner import EvalRecord, EvalReport, KindAggregate, run_eval

__all__ = [
    "HUMAN_GRADES",
    "EvalRecord",
    "EvalReport",
    "GroundTruthEntry",
    "KindAggregate",
    "answer_similarity",
    "load_ground_truth",
    "parse_report_json",
    "recall_at_k",
    "render_report",
    "run_eval",
    "validate_supporting_ids",
]
