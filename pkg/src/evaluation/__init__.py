"""评估指标模块"""

from src.evaluation.correlation import correlate_rows, pearson
from src.evaluation.errors import DegenerateInput, EmptyGold, EmptyPredictions, LengthMismatch, MetricError
from src.evaluation.metrics import (
    CorpusEvaluation,
    ExampleReport,
    MetricReport,
    bi_nli,
    evaluate_corpus,
    evaluate_corpus_detailed,
    evaluate_example,
    f1,
    format_report_table,
    rb_precision,
    rb_recall,
    rf_precision,
    rf_recall,
    sentence_baseline,
)

__all__ = [
    "CorpusEvaluation",
    "DegenerateInput",
    "EmptyGold",
    "EmptyPredictions",
    "ExampleReport",
    "LengthMismatch",
    "MetricError",
    "MetricReport",
    "bi_nli",
    "correlate_rows",
    "evaluate_corpus",
    "evaluate_corpus_detailed",
    "evaluate_example",
    "f1",
    "format_report_table",
    "pearson",
    "rb_precision",
    "rb_recall",
    "rf_precision",
    "rf_recall",
    "sentence_baseline",
]
