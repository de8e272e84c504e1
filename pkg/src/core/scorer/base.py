"""
蕴含打分器抽象基类

所有打分后端（远程服务、词汇 oracle）必须继承此类并实现 _score_chunk。
基类负责输入校验、缓存查询与回填、按 max_batch 切分子批次，
保证 score_batch 的第 i 个结果与 score(pairs[i]) 完全一致。
"""

import logging
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Sequence, Tuple

from src.core.scorer.cache import ScoreCache
from src.core.scorer.errors import EmptyInput, ProtocolError, ScorerError
from src.monitoring.metrics import get_metrics

Pair = Tuple[str, str]


class EntailmentScorer(ABC):
    """
    蕴含打分器抽象基类

    NLI(premise, claim) → [0, 1]。实现必须可以被多个工作线程并发调用。
    """

    backend_name: str = "base"

    def __init__(self, max_batch: int = 32, cache: Optional[ScoreCache] = None):
        """
        Args:
            max_batch: 单次后端调用的最大 pair 数
            cache: 打分缓存（None 表示不缓存）
        """
        if max_batch < 1:
            raise ValueError(f"max_batch 必须 >= 1，当前为 {max_batch}")
        self.max_batch = max_batch
        self.cache = cache
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    def _score_chunk(self, pairs: Sequence[Pair]) -> List[float]:
        """
        对一个子批次打分（长度不超过 max_batch）

        Returns:
            与 pairs 等长、顺序一致的分数列表，值在 [0, 1]
        """

    def score(self, premise: str, claim: str) -> float:
        """对单个 (premise, claim) 打分"""
        return self.score_batch([(premise, claim)])[0]

    def score_batch(self, pairs: Sequence[Pair]) -> List[float]:
        """
        批量打分

        先查缓存，未命中的 pair 去重后按 max_batch 切分，每个子批次调用一次后端。
        某个子批次失败时整体抛出异常，failing_index 为该子批次第一个 pair 在输入中的位置。

        Args:
            pairs: (premise, claim) 列表

        Returns:
            与 pairs 一一对应的分数列表

        Raises:
            EmptyInput: 某个 premise 或 claim 为空
            TransportError / ProtocolError: 后端调用失败
        """
        for i, (premise, claim) in enumerate(pairs):
            if not premise or not premise.strip() or not claim or not claim.strip():
                raise EmptyInput(failing_index=i, backend=self.backend_name)

        results: List[Optional[float]] = [None] * len(pairs)
        pending: Dict[Pair, List[int]] = {}
        for i, pair in enumerate(pairs):
            if pair in pending:
                pending[pair].append(i)
                continue
            cached = self.cache.get(*pair) if self.cache is not None else None
            if cached is not None:
                results[i] = cached
            else:
                pending[pair] = [i]

        misses = list(pending.keys())
        for start in range(0, len(misses), self.max_batch):
            chunk = misses[start:start + self.max_batch]
            first_index = pending[chunk[0]][0]
            try:
                scores = self._score_chunk(chunk)
            except ScorerError as e:
                get_metrics().record_scored(self.backend_name, "error", len(chunk))
                raise e.with_context(failing_index=first_index, chunk_size=len(chunk), backend=self.backend_name)
            if len(scores) != len(chunk):
                raise ProtocolError(
                    f"返回分数数量 {len(scores)} 与请求数量 {len(chunk)} 不一致",
                    failing_index=first_index,
                    backend=self.backend_name,
                )
            get_metrics().record_scored(self.backend_name, "success", len(chunk))
            for pair, value in zip(chunk, scores):
                if self.cache is not None:
                    self.cache.put(pair[0], pair[1], value)
                for i in pending[pair]:
                    results[i] = value

        return [float(v) for v in results]

    def close(self) -> None:
        """释放后端资源（默认无操作）"""

    def __enter__(self) -> "EntailmentScorer":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
