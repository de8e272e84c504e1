"""数据集预处理流水线"""

from src.pipeline.rose import (
    AlignmentOutcome,
    AlignmentStatus,
    PipelineResult,
    align_example,
    dedupe_acus,
    normalize_acu,
    run_pipeline,
    split_train_dev,
)

__all__ = [
    "AlignmentOutcome",
    "AlignmentStatus",
    "PipelineResult",
    "align_example",
    "dedupe_acus",
    "normalize_acu",
    "run_pipeline",
    "split_train_dev",
]
