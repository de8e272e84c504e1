"""
命题分割评估指标

无参考指标（RF）:
    rf_precision  每个预测命题是否被原文蕴含（premise = 原文）
    rf_recall     原文每个句子是否被预测命题拼接文本蕴含
有参考指标（RB）:
    基于 BiNLI（双向蕴含分数的较小值）在预测与标注命题之间做最佳匹配。

所有求和使用 math.fsum，结果与命题顺序无关且在任意并发度下逐位一致。
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from src.core.errors import ApsError, EmptyInputError
from src.core.scorer.base import EntailmentScorer
from src.core.types import DatasetExample, Passage, Proposition, PropositionSet, concat_propositions
from src.evaluation.errors import EmptyGold, EmptyPredictions, LengthMismatch
from src.monitoring.metrics import get_metrics
from src.utils.helpers import log_duration, run_bounded
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class MetricReport:
    """语料级指标报告，所有分数为 [0, 1] 之间的小数

    每个字段都是逐样本同名指标的算术平均；*_f1_of_means 是平均后的 P、R 的调和平均，仅供参考。
    """

    rf_p: float
    rf_r: float
    rf_f1: float
    rb_p: Optional[float]
    rb_r: Optional[float]
    rb_f1: Optional[float]
    avg_props: float
    n_examples: int
    rf_f1_of_means: Optional[float] = None
    rb_f1_of_means: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ExampleReport:
    """单个样本的指标及逐命题原始分数（用于审计）"""

    example_id: str
    rf_p: float
    rf_r: float
    rf_f1: float
    rb_p: Optional[float]
    rb_r: Optional[float]
    rb_f1: Optional[float]
    n_props: int
    rf_precision_scores: Tuple[float, ...]
    rf_recall_scores: Tuple[float, ...]
    rb_precision_best: Tuple[float, ...] = ()
    rb_recall_best: Tuple[float, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["id"] = data.pop("example_id")
        for key in ("rf_precision_scores", "rf_recall_scores", "rb_precision_best", "rb_recall_best"):
            data[key] = list(data[key])
        return data


@dataclass
class CorpusEvaluation:
    """语料评估结果：汇总报告 + 逐样本报告 + 失败样本"""

    report: Optional[MetricReport]
    example_reports: List[ExampleReport] = field(default_factory=list)
    failures: List[Tuple[str, ApsError]] = field(default_factory=list)


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def f1(p: float, r: float) -> float:
    """调和平均，p + r = 0 时为 0"""
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


def _require_predictions(props: PropositionSet) -> None:
    if len(props) == 0:
        raise EmptyPredictions()


def _require_passage(passage: Passage) -> None:
    if passage.is_empty:
        raise EmptyInputError("段落为空", passage_id=passage.id)


def rf_precision_scores(Q: PropositionSet, passage: Passage, scorer: EntailmentScorer) -> List[float]:
    """每个预测命题被原文蕴含的分数"""
    _require_predictions(Q)
    _require_passage(passage)
    return scorer.score_batch([(passage.text, q.text) for q in Q.flatten()])


def rf_precision(Q: PropositionSet, passage: Passage, scorer: EntailmentScorer) -> float:
    """
    无参考精确率：预测命题被原文蕴含分数的平均值（分母为预测命题数 k'）

    Raises:
        EmptyPredictions: 预测为空
    """
    return _mean(rf_precision_scores(Q, passage, scorer))


def rf_recall_scores(Q: PropositionSet, passage: Passage, scorer: EntailmentScorer) -> List[float]:
    """原文每个句子被预测命题拼接文本蕴含的分数"""
    _require_predictions(Q)
    _require_passage(passage)
    premise = concat_propositions(Q)
    return scorer.score_batch([(premise, s.text) for s in passage.sentences])


def rf_recall(Q: PropositionSet, passage: Passage, scorer: EntailmentScorer) -> float:
    """
    无参考召回率：每个句子被预测命题拼接文本蕴含分数的平均值

    Raises:
        EmptyPredictions: 预测为空
    """
    return _mean(rf_recall_scores(Q, passage, scorer))


def bi_nli(p: Proposition, q: Proposition, scorer: EntailmentScorer) -> float:
    """双向蕴含：min(NLI(p, q), NLI(q, p))"""
    forward, backward = scorer.score_batch([(p.text, q.text), (q.text, p.text)])
    return min(forward, backward)


def binli_matrix(P: PropositionSet, Q: PropositionSet, scorer: EntailmentScorer) -> List[List[float]]:
    """
    计算 BiNLI 矩阵，M[i][j] = bi_nli(p_i, q_j)

    所有方向的打分合并为一次 score_batch 调用。

    Raises:
        EmptyPredictions: 预测为空
        EmptyGold: 标注为空
    """
    _require_predictions(Q)
    if len(P) == 0:
        raise EmptyGold()
    gold = P.texts()
    pred = Q.texts()
    pairs: List[Tuple[str, str]] = []
    for p in gold:
        for q in pred:
            pairs.append((p, q))
            pairs.append((q, p))
    scores = scorer.score_batch(pairs)
    width = len(pred)
    return [
        [min(scores[2 * (i * width + j)], scores[2 * (i * width + j) + 1]) for j in range(width)]
        for i in range(len(gold))
    ]


def _rb_from_matrix(matrix: List[List[float]]) -> Tuple[List[float], List[float]]:
    """返回 (每个预测的最佳匹配, 每个标注的最佳匹配)"""
    per_pred = [max(row[j] for row in matrix) for j in range(len(matrix[0]))]
    per_gold = [max(row) for row in matrix]
    return per_pred, per_gold


def rb_precision(Q: PropositionSet, P: PropositionSet, scorer: EntailmentScorer) -> float:
    """有参考精确率：对每个预测命题取与标注命题的最大 BiNLI，再取平均"""
    per_pred, _ = _rb_from_matrix(binli_matrix(P, Q, scorer))
    return _mean(per_pred)


def rb_recall(Q: PropositionSet, P: PropositionSet, scorer: EntailmentScorer) -> float:
    """有参考召回率：对每个标注命题取与预测命题的最大 BiNLI，再取平均"""
    _, per_gold = _rb_from_matrix(binli_matrix(P, Q, scorer))
    return _mean(per_gold)


def sentence_baseline(passage: Passage) -> PropositionSet:
    """句子基线：每个句子作为一个命题（分组模式，每组一个）"""
    _require_passage(passage)
    return PropositionSet.grouped([[s.text] for s in passage.sentences])


def evaluate_example(
    example: DatasetExample,
    prediction: PropositionSet,
    scorer: EntailmentScorer,
) -> ExampleReport:
    """
    计算单个样本的全部指标

    标注为空时 RB 指标为 None。

    Raises:
        EmptyPredictions: 预测为空
        EmptyInputError: 段落为空
        ScorerError: 打分失败
    """
    passage = example.passage
    precision_scores = rf_precision_scores(prediction, passage, scorer)
    recall_scores = rf_recall_scores(prediction, passage, scorer)
    rf_p = _mean(precision_scores)
    rf_r = _mean(recall_scores)

    rb_p = rb_r = rb_f1 = None
    per_pred: List[float] = []
    per_gold: List[float] = []
    if len(example.gold) > 0:
        per_pred, per_gold = _rb_from_matrix(binli_matrix(example.gold, prediction, scorer))
        rb_p = _mean(per_pred)
        rb_r = _mean(per_gold)
        rb_f1 = f1(rb_p, rb_r)

    return ExampleReport(
        example_id=example.id,
        rf_p=rf_p,
        rf_r=rf_r,
        rf_f1=f1(rf_p, rf_r),
        rb_p=rb_p,
        rb_r=rb_r,
        rb_f1=rb_f1,
        n_props=len(prediction),
        rf_precision_scores=tuple(precision_scores),
        rf_recall_scores=tuple(recall_scores),
        rb_precision_best=tuple(per_pred),
        rb_recall_best=tuple(per_gold),
    )


def aggregate_reports(reports: Sequence[ExampleReport]) -> MetricReport:
    """
    宏平均：每个指标（包括 F1）都是逐样本值按样本顺序的 fsum 算术平均

    RB 指标只在有标注的样本上平均，全部样本都没有标注时为 None。
    """
    if not reports:
        raise EmptyInputError("没有可汇总的样本")
    with_gold = [r for r in reports if r.rb_p is not None]
    rf_p = _mean([r.rf_p for r in reports])
    rf_r = _mean([r.rf_r for r in reports])
    rb_p = rb_r = rb_f1 = None
    if with_gold:
        rb_p = _mean([r.rb_p for r in with_gold])
        rb_r = _mean([r.rb_r for r in with_gold])
        rb_f1 = _mean([r.rb_f1 for r in with_gold])
    return MetricReport(
        rf_p=rf_p,
        rf_r=rf_r,
        rf_f1=_mean([r.rf_f1 for r in reports]),
        rb_p=rb_p,
        rb_r=rb_r,
        rb_f1=rb_f1,
        avg_props=_mean([float(r.n_props) for r in reports]),
        n_examples=len(reports),
        rf_f1_of_means=f1(rf_p, rf_r),
        rb_f1_of_means=f1(rb_p, rb_r) if with_gold else None,
    )


@log_duration("corpus_evaluation_duration")
def evaluate_corpus_detailed(
    examples: Sequence[DatasetExample],
    predictions: Sequence[PropositionSet],
    scorer: EntailmentScorer,
    concurrency: int = 1,
) -> CorpusEvaluation:
    """
    评估整个语料，单个样本失败不会中断整体评估

    样本可以并发计算，汇总按样本顺序顺序进行。

    Raises:
        LengthMismatch: 样本数与预测数不一致
    """
    if len(examples) != len(predictions):
        raise LengthMismatch(n_examples=len(examples), n_predictions=len(predictions))

    metrics = get_metrics()
    results = run_bounded(
        lambda item: evaluate_example(item[0], item[1], scorer),
        list(zip(examples, predictions)),
        concurrency=concurrency,
        return_exceptions=True,
    )

    evaluation = CorpusEvaluation(report=None)
    for example, result in zip(examples, results):
        if isinstance(result, ApsError):
            result.with_context(example_id=example.id)
            logger.warning("example_evaluation_failed", example_id=example.id, error=str(result))
            metrics.record_evaluation("error")
            evaluation.failures.append((example.id, result))
        elif isinstance(result, BaseException):
            raise result
        else:
            metrics.record_evaluation("ok")
            evaluation.example_reports.append(result)

    if evaluation.example_reports:
        evaluation.report = aggregate_reports(evaluation.example_reports)
    logger.info(
        "corpus_evaluated",
        n_examples=len(examples),
        n_ok=len(evaluation.example_reports),
        n_failed=len(evaluation.failures),
    )
    return evaluation


def evaluate_corpus(
    examples: Sequence[DatasetExample],
    predictions: Sequence[PropositionSet],
    scorer: EntailmentScorer,
    concurrency: int = 1,
) -> MetricReport:
    """
    评估整个语料并返回宏平均报告

    Raises:
        LengthMismatch: 样本数与预测数不一致
        ApsError: 任一样本失败时抛出第一个失败，上下文中带 example_id
    """
    evaluation = evaluate_corpus_detailed(examples, predictions, scorer, concurrency)
    if evaluation.failures:
        raise evaluation.failures[0][1]
    return evaluation.report


def join_predictions(
    examples: Sequence[DatasetExample],
    predictions: Mapping[str, PropositionSet],
) -> Tuple[List[DatasetExample], List[PropositionSet], List[str]]:
    """按 id 关联预测与标注，返回 (有预测的样本, 对应预测, 缺少预测的 id)"""
    joined_examples: List[DatasetExample] = []
    joined_predictions: List[PropositionSet] = []
    missing: List[str] = []
    for example in examples:
        prediction = predictions.get(example.id)
        if prediction is None:
            missing.append(example.id)
            continue
        joined_examples.append(example)
        joined_predictions.append(prediction)
    return joined_examples, joined_predictions, missing


REPORT_COLUMNS = ("RF P", "RF R", "RF F1", "RB P", "RB R", "RB F1", "# Props")


def _pct(value: Optional[float]) -> str:
    return "-" if value is None else f"{value * 100:.2f}"


def format_report_table(report: MetricReport) -> str:
    """格式化为百分比表格（两位小数），列顺序 RF P/R/F1, RB P/R/F1, # Props"""
    cells = [
        _pct(report.rf_p),
        _pct(report.rf_r),
        _pct(report.rf_f1),
        _pct(report.rb_p),
        _pct(report.rb_r),
        _pct(report.rb_f1),
        f"{report.avg_props:.2f}",
    ]
    widths = [max(len(h), len(c)) for h, c in zip(REPORT_COLUMNS, cells)]
    header = " | ".join(h.rjust(w) for h, w in zip(REPORT_COLUMNS, widths))
    row = " | ".join(c.rjust(w) for c, w in zip(cells, widths))
    return f"{header}\n{row}"
