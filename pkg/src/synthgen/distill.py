"""
蒸馏样本构建

对每条合成文本：分句 → 渲染分组输入 → 调用教师模型 → 严格解析分组输出。
解析失败或调用失败的输出连同原始响应一起进入隔离区，不产生部分记录。
"""

import asyncio
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.config.settings import FormatConfig
from src.core.errors import ApsError
from src.core.types import Passage, PropositionSet
from src.formats.errors import FormatError
from src.formats.training_format import (
    DEFAULT_FORMAT,
    TrainingRecord,
    parse_grouped_output,
    render_grouped,
    render_grouped_input,
)
from src.monitoring.metrics import get_metrics
from src.synthgen.corpus import SyntheticText
from src.synthgen.generation_client import GenerationClient, GenerationError, GenerationRequest
from src.synthgen.prompts import Length
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class DistillationRecord:
    """教师模型标注的 (文本, 分组命题) 样本"""

    text: str
    propositions: PropositionSet
    domain: str
    length: Length
    teacher_id: str
    source_id: str

    def __post_init__(self):
        if not self.propositions.is_grouped:
            raise ApsError("蒸馏样本的命题必须是分组模式", source_id=self.source_id)

    def passage(self) -> Passage:
        return Passage.from_text(self.source_id, self.text)

    def to_training_record(self, cfg: FormatConfig = DEFAULT_FORMAT) -> TrainingRecord:
        return render_grouped(self.passage(), self.propositions, cfg)

    def to_dict(self, cfg: FormatConfig = DEFAULT_FORMAT) -> Dict[str, Any]:
        row = self.to_training_record(cfg).to_dict()
        row.update({"domain": self.domain, "length": self.length.value, "teacher_id": self.teacher_id})
        return row


@dataclass(frozen=True)
class QuarantineEntry:
    """被隔离的教师输出"""

    source_id: str
    raw_response: Optional[str]
    error_type: str
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source_id": self.source_id,
            "raw_response": self.raw_response,
            "error_type": self.error_type,
            "message": self.message,
        }


@dataclass
class DistillationResult:
    records: List[DistillationRecord] = field(default_factory=list)
    quarantined: List[QuarantineEntry] = field(default_factory=list)


def source_id_for(text: SyntheticText) -> str:
    return f"{text.domain}/{text.length.value}/{text.index}"


async def build_distillation_records(
    texts: Sequence[SyntheticText],
    teacher_client: GenerationClient,
    cfg: FormatConfig = DEFAULT_FORMAT,
    teacher_id: str = "teacher",
    concurrency: int = 8,
    temperature: float = 0.0,
    max_attempts: int = 4,
) -> DistillationResult:
    """
    用教师模型为合成文本标注分组命题

    Args:
        texts: 合成文本
        teacher_client: 教师模型客户端
        cfg: 格式配置
        teacher_id: 写入记录的教师标识
        concurrency: 最大并发调用数
        temperature: 教师调用温度

    Returns:
        DistillationResult，记录与隔离项都保持输入顺序
    """
    metrics = get_metrics()
    semaphore = asyncio.Semaphore(concurrency)

    async def _label(text: SyntheticText) -> Tuple[Optional[DistillationRecord], Optional[QuarantineEntry]]:
        source_id = source_id_for(text)
        raw: Optional[str] = None
        try:
            passage = Passage.from_text(source_id, text.text)
            if passage.is_empty:
                raise FormatError("文本没有任何句子", source_id=source_id)
            request = GenerationRequest(
                prompt=render_grouped_input(passage, cfg),
                temperature=temperature,
                max_attempts=max_attempts,
            )
            async with semaphore:
                raw = await teacher_client.generate(request, purpose="distill")
            propositions = parse_grouped_output(raw, passage.n_sentences, cfg)
        except (FormatError, GenerationError) as e:
            error_type = type(e).__name__
            metrics.record_quarantine(error_type)
            logger.warning("teacher_output_quarantined", source_id=source_id, error_type=error_type, error=str(e))
            return None, QuarantineEntry(source_id, raw, error_type, str(e))
        record = DistillationRecord(
            text=text.text,
            propositions=propositions,
            domain=text.domain,
            length=text.length,
            teacher_id=teacher_id,
            source_id=source_id,
        )
        return record, None

    outcomes = await asyncio.gather(*(_label(t) for t in texts))

    result = DistillationResult()
    for record, quarantined in outcomes:
        if record is not None:
            result.records.append(record)
        else:
            result.quarantined.append(quarantined)
    logger.info("distillation_finished", records=len(result.records), quarantined=len(result.quarantined))
    return result
