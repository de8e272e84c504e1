"""
打分器工厂模块

根据 ScorerBackend 配置创建对应的打分器实例，并为其挂载 LRU 缓存。
"""

import logging
from typing import Dict, List, Optional, Type

from src.config.settings import ScorerBackend, ScorerKind
from src.core.scorer.base import EntailmentScorer
from src.core.scorer.cache import ScoreCache
from src.core.scorer.lexical_oracle import LexicalOracleScorer
from src.core.scorer.remote import RemoteScorer


class ScorerFactory:
    """
    打分器工厂类

    使用示例：
        ```python
        scorer = ScorerFactory.create(ScorerBackend(kind="oracle"))
        scorer.score("the cat sat on the mat", "the cat sat")  # 1.0
        ```
    """

    _logger = logging.getLogger("ScorerFactory")

    # 后端类型到打分器类的映射
    _SCORER_REGISTRY: Dict[ScorerKind, Type[EntailmentScorer]] = {
        ScorerKind.LEXICAL_ORACLE: LexicalOracleScorer,
        ScorerKind.REMOTE: RemoteScorer,
    }

    @classmethod
    def create(cls, backend: ScorerBackend, cache: Optional[ScoreCache] = None) -> EntailmentScorer:
        """
        创建打分器

        Args:
            backend: 打分后端配置
            cache: 指定缓存实例；None 时按 backend.cache_capacity 新建（容量为 0 则不缓存）

        Returns:
            打分器实例

        Raises:
            ValueError: 不支持的后端类型
        """
        scorer_class = cls._SCORER_REGISTRY.get(backend.kind)
        if scorer_class is None:
            raise ValueError(
                f"不支持的打分后端: {backend.kind}\n"
                f"支持的后端: {cls.get_supported_backends()}"
            )
        if cache is None and backend.cache_capacity > 0:
            cache = ScoreCache(backend.cache_capacity)

        cls._logger.info(f"创建打分器: {backend.kind.value} -> {scorer_class.__name__}")
        return scorer_class.from_backend(backend, cache=cache)

    @classmethod
    def register_backend(cls, kind: ScorerKind, scorer_class: type) -> None:
        """
        注册新的打分后端（用于扩展和测试）

        Args:
            kind: 后端类型
            scorer_class: 打分器类（必须继承自 EntailmentScorer 并提供 from_backend）
        """
        if not issubclass(scorer_class, EntailmentScorer):
            raise TypeError(f"{scorer_class.__name__} 必须继承自 EntailmentScorer")
        cls._SCORER_REGISTRY[kind] = scorer_class
        cls._logger.info(f"注册打分后端: {kind.value} -> {scorer_class.__name__}")

    @classmethod
    def get_supported_backends(cls) -> List[str]:
        """获取所有支持的后端列表"""
        return [kind.value for kind in cls._SCORER_REGISTRY.keys()]
