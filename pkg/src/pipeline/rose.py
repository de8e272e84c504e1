"""
ROSE 数据集预处理流水线

步骤：
    1. ACU 归一化：去掉句末句点前的空白，缺少句末标点时补句点
    2. ACU 去重：被其他 ACU 包含的 ACU 删除
    3. 命题-句子对齐：
        1a. 对每个句子打分，最高分 >= tau 时对齐到该句（同分取序号最小者）
        1b. 否则对前缀（句子 0..i 以空格拼接）依次打分，对齐到第一个 >= tau 的 i；
            都不满足则丢弃样本（unsupported）
        2.  存在没有任何命题的句子时丢弃样本（non_comprehensive）
    4. 训练/开发集随机划分
"""

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.config.settings import AlignmentConfig
from src.core.errors import ApsError, EmptyInputError
from src.core.scorer.base import EntailmentScorer
from src.core.scorer.errors import ScorerError
from src.core.types import DatasetExample, Proposition, PropositionSet
from src.monitoring.metrics import get_metrics
from src.utils.helpers import log_duration, run_bounded
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

_ELLIPSES = ("...", "…")
_TERMINAL = (".", "!", "?")


class AlignmentStatus(str, Enum):
    ALIGNED = "aligned"
    UNSUPPORTED = "unsupported"
    NON_COMPREHENSIVE = "non_comprehensive"


@dataclass(frozen=True)
class PropositionDiagnostic:
    """单个命题的对齐诊断信息"""

    text: str
    best_sentence: int
    best_score: float
    aligned_sentence: Optional[int] = None
    via: Optional[str] = None  # "sentence" / "prefix"
    prefix_score: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "text": self.text,
            "best_sentence": self.best_sentence,
            "best_score": self.best_score,
            "aligned_sentence": self.aligned_sentence,
            "via": self.via,
            "prefix_score": self.prefix_score,
        }


@dataclass(frozen=True)
class AlignmentDiagnostics:
    propositions: Tuple[PropositionDiagnostic, ...]
    sentence_counts: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "propositions": [p.to_dict() for p in self.propositions],
            "sentence_counts": list(self.sentence_counts),
        }


@dataclass(frozen=True)
class AlignmentOutcome:
    status: AlignmentStatus
    aligned: Optional[DatasetExample]
    diagnostics: AlignmentDiagnostics


@dataclass
class PipelineResult:
    """流水线结果：保留的样本、被丢弃的样本（含原因）、出错的样本和计数"""

    kept: List[DatasetExample] = field(default_factory=list)
    discarded: List[Tuple[DatasetExample, AlignmentOutcome]] = field(default_factory=list)
    errors: List[Tuple[str, ApsError]] = field(default_factory=list)

    @property
    def report(self) -> Dict[str, int]:
        counts = {status.value: 0 for status in AlignmentStatus}
        counts[AlignmentStatus.ALIGNED.value] = len(self.kept)
        for _, outcome in self.discarded:
            counts[outcome.status.value] += 1
        counts["error"] = len(self.errors)
        return counts


def normalize_acu(text: str) -> str:
    """
    ACU 归一化

    "Many seals are shot ." -> "Many seals are shot."
    "England won"           -> "England won."
    "He paused..."          -> 不变
    """
    s = text.strip()
    if s.endswith(_ELLIPSES):
        return s
    if s.endswith("."):
        return s[:-1].rstrip() + "."
    if s.endswith(_TERMINAL):
        return s
    return s + "."


def _core(acu: str) -> str:
    return acu[:-1] if acu.endswith(".") else acu


def dedupe_acus(acus: Sequence[str]) -> List[str]:
    """
    删除被其他 ACU 包含的 ACU（去掉句末句点后做子串匹配），保留原有顺序

    两个 ACU 互相包含时只删一个：较长者保留，等长时保留后出现的。
    """
    cores = [_core(a) for a in acus]
    survivors: List[str] = []
    for i, acu in enumerate(acus):
        removed = False
        for j, other in enumerate(acus):
            if j == i or cores[i] not in other:
                continue
            mutual = cores[j] in acu
            if not mutual:
                removed = True
                break
            # 互相包含时按长度和位置决出保留者
            if len(other) > len(acu) or (len(other) == len(acu) and j > i):
                removed = True
                break
        if not removed:
            survivors.append(acu)
    return survivors


def _score_with_context(scorer: EntailmentScorer, pairs, n_sentences: int, stage: str, example_id: str, prop_ids):
    try:
        return scorer.score_batch(pairs)
    except ScorerError as e:
        index = e.failing_index
        if index is not None:
            e.with_context(proposition=prop_ids[index // n_sentences], sentence=index % n_sentences)
        raise e.with_context(example_id=example_id, stage=stage)


def align_example(example: DatasetExample, cfg: AlignmentConfig, scorer: EntailmentScorer) -> AlignmentOutcome:
    """
    把标注命题对齐到句子

    Args:
        example: 样本（标注按展平顺序处理）
        cfg: 对齐配置（tau）
        scorer: 蕴含打分器

    Returns:
        AlignmentOutcome

    Raises:
        EmptyInputError: 段落或标注为空
        ScorerError: 打分失败，上下文中带 example_id / proposition / sentence
    """
    sentences = example.passage.sentence_texts()
    props = example.gold.texts()
    n = len(sentences)
    if n == 0:
        raise EmptyInputError("段落为空", example_id=example.id)
    if not props:
        raise EmptyInputError("标注命题为空", example_id=example.id)
    tau = cfg.tau

    # 1a. 逐句打分
    pairs = [(sentence, prop) for prop in props for sentence in sentences]
    scores = _score_with_context(scorer, pairs, n, "sentence", example.id, list(range(len(props))))

    best: List[Tuple[int, float]] = []
    assigned: List[Optional[int]] = []
    for j in range(len(props)):
        row = scores[j * n:(j + 1) * n]
        best_i = 0
        for i in range(1, n):
            if row[i] > row[best_i]:
                best_i = i
        best.append((best_i, row[best_i]))
        assigned.append(best_i if row[best_i] >= tau else None)

    # 1b. 前缀回退
    via: List[Optional[str]] = ["sentence" if a is not None else None for a in assigned]
    prefix_scores: List[Optional[float]] = [None] * len(props)
    pending = [j for j, a in enumerate(assigned) if a is None]
    if pending:
        prefixes = [" ".join(sentences[: i + 1]) for i in range(n)]
        prefix_pairs = [(prefix, props[j]) for j in pending for prefix in prefixes]
        prefix_results = _score_with_context(scorer, prefix_pairs, n, "prefix", example.id, pending)
        for position, j in enumerate(pending):
            row = prefix_results[position * n:(position + 1) * n]
            prefix_scores[j] = max(row)
            for i, value in enumerate(row):
                if value >= tau:
                    assigned[j] = i
                    via[j] = "prefix"
                    break

    counts = [0] * n
    for a in assigned:
        if a is not None:
            counts[a] += 1

    diagnostics = AlignmentDiagnostics(
        propositions=tuple(
            PropositionDiagnostic(
                text=props[j],
                best_sentence=best[j][0],
                best_score=best[j][1],
                aligned_sentence=assigned[j],
                via=via[j],
                prefix_score=prefix_scores[j],
            )
            for j in range(len(props))
        ),
        sentence_counts=tuple(counts),
    )

    if any(a is None for a in assigned):
        return AlignmentOutcome(AlignmentStatus.UNSUPPORTED, None, diagnostics)
    if any(c == 0 for c in counts):
        return AlignmentOutcome(AlignmentStatus.NON_COMPREHENSIVE, None, diagnostics)

    gold = PropositionSet.from_propositions([Proposition(t, a) for t, a in zip(props, assigned)], n)
    aligned = DatasetExample(passage=example.passage, gold=gold, meta=dict(example.meta))
    return AlignmentOutcome(AlignmentStatus.ALIGNED, aligned, diagnostics)


def prepare_example(example: DatasetExample) -> DatasetExample:
    """归一化并去重标注 ACU，返回不分组的新样本"""
    acus = dedupe_acus([normalize_acu(t) for t in example.gold.texts()])
    return DatasetExample(passage=example.passage, gold=PropositionSet.ungrouped(acus), meta=dict(example.meta))


@log_duration("pipeline_duration")
def run_pipeline(
    raw: Sequence[DatasetExample],
    cfg: AlignmentConfig,
    scorer: EntailmentScorer,
    concurrency: int = 1,
) -> PipelineResult:
    """
    对整个语料执行 归一化 → 去重 → 对齐

    单个样本出错只记录到结果中，不会中断整个语料。
    """
    metrics = get_metrics()

    def _process(example: DatasetExample) -> AlignmentOutcome:
        return align_example(prepare_example(example), cfg, scorer)

    outcomes = run_bounded(_process, list(raw), concurrency=concurrency, return_exceptions=True)

    result = PipelineResult()
    for example, outcome in zip(raw, outcomes):
        if isinstance(outcome, ApsError):
            outcome.with_context(example_id=example.id)
            logger.warning("alignment_failed", example_id=example.id, error=str(outcome))
            metrics.record_alignment("error")
            result.errors.append((example.id, outcome))
            continue
        if isinstance(outcome, BaseException):
            raise outcome
        metrics.record_alignment(outcome.status.value)
        if outcome.status == AlignmentStatus.ALIGNED:
            result.kept.append(outcome.aligned)
        else:
            logger.info("example_discarded", example_id=example.id, reason=outcome.status.value)
            result.discarded.append((example, outcome))

    logger.info("pipeline_finished", **result.report)
    return result


def split_train_dev(
    examples: Sequence[DatasetExample],
    dev_fraction: float,
    seed: int,
) -> Tuple[List[DatasetExample], List[DatasetExample]]:
    """
    按固定种子随机划分训练集和开发集，两部分都保持输入中的相对顺序

    开发集大小为 round(len(examples) * dev_fraction)。

    Raises:
        ValueError: dev_fraction 不在 (0, 1) 之间
    """
    if not 0 < dev_fraction < 1:
        raise ValueError(f"dev_fraction 必须在 (0, 1) 之间，当前为 {dev_fraction}")
    indices = list(range(len(examples)))
    random.Random(seed).shuffle(indices)
    n_dev = round(len(examples) * dev_fraction)
    dev_indices = set(indices[:n_dev])
    train = [e for i, e in enumerate(examples) if i not in dev_indices]
    dev = [e for i, e in enumerate(examples) if i in dev_indices]
    return train, dev
