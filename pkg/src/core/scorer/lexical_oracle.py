"""
词汇 oracle 打分器

确定性的 NLI 替身：claim 词集合中出现在 premise 词集合里的比例。
strict 模式下只有 claim 的词全部包含在 premise 中才得 1.0，否则为 0.0。
"""

from typing import List, Optional, Sequence

from src.config.settings import ScorerBackend
from src.core.scorer.base import EntailmentScorer, Pair
from src.core.scorer.cache import ScoreCache
from src.core.segmentation import token_set


def lexical_oracle_score(premise: str, claim: str, strict: bool = False) -> float:
    """
    计算词汇包含分数

    Args:
        premise: 前提文本
        claim: 待判断文本
        strict: 是否使用全有或全无的判定

    Returns:
        |claim ∩ premise| / |claim|，claim 归一化后为空时为 1.0
    """
    claim_tokens = token_set(claim)
    if not claim_tokens:
        return 1.0
    overlap = len(claim_tokens & token_set(premise))
    if strict:
        return 1.0 if overlap == len(claim_tokens) else 0.0
    return overlap / len(claim_tokens)


class LexicalOracleScorer(EntailmentScorer):
    """词汇 oracle 后端（纯函数，无网络）"""

    backend_name = "oracle"

    def __init__(self, strict: bool = False, max_batch: int = 1024, cache: Optional[ScoreCache] = None):
        super().__init__(max_batch=max_batch, cache=cache)
        self.strict = strict

    @classmethod
    def from_backend(cls, backend: ScorerBackend, cache: Optional[ScoreCache] = None) -> "LexicalOracleScorer":
        return cls(strict=backend.strict, max_batch=backend.max_batch, cache=cache)

    def _score_chunk(self, pairs: Sequence[Pair]) -> List[float]:
        return [lexical_oracle_score(premise, claim, self.strict) for premise, claim in pairs]
