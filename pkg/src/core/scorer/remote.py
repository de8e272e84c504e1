"""
远程 NLI 打分服务客户端

协议: POST {endpoint}/score
    请求体 {"pairs": [{"premise": str, "claim": str}, ...]}
    响应体 {"scores": [float, ...]}（长度和顺序与请求一致）

429/5xx、连接失败和超时按指数退避重试 3 次（基数 500ms），其他错误直接抛出。
"""

import math
import time
from typing import Any, List, Optional, Sequence

import requests
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt, wait_exponential

from src.config.settings import ScorerBackend
from src.core.scorer.base import EntailmentScorer, Pair
from src.core.scorer.cache import ScoreCache
from src.core.scorer.errors import ProtocolError, TransportError
from src.monitoring.metrics import get_metrics
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


class RemoteScorer(EntailmentScorer):
    """远程打分后端"""

    backend_name = "remote"

    def __init__(
        self,
        endpoint: str,
        timeout: float = 30.0,
        max_batch: int = 32,
        cache: Optional[ScoreCache] = None,
        max_retries: int = 3,
        retry_base: float = 0.5,
        session: Optional[requests.Session] = None,
    ):
        """
        Args:
            endpoint: 服务根地址，例如 http://localhost:8080
            timeout: 单次请求超时（秒）
            max_batch: 单次请求最多包含的 pair 数
            cache: 打分缓存
            max_retries: 可重试错误的最大重试次数
            retry_base: 指数退避的基数（秒）
            session: 可注入的 requests.Session（测试用）
        """
        super().__init__(max_batch=max_batch, cache=cache)
        if not endpoint:
            raise ValueError("远程打分后端必须配置 endpoint")
        self.endpoint = endpoint.rstrip("/")
        self.url = f"{self.endpoint}/score"
        self.timeout = timeout
        self._session = session or requests.Session()
        self._retrying = Retrying(
            stop=stop_after_attempt(max_retries + 1),
            wait=wait_exponential(multiplier=retry_base, max=30),
            retry=retry_if_exception_type(TransportError),
            before_sleep=self._log_retry,
            reraise=True,
        )

    @classmethod
    def from_backend(cls, backend: ScorerBackend, cache: Optional[ScoreCache] = None) -> "RemoteScorer":
        return cls(
            endpoint=backend.endpoint,
            timeout=backend.timeout,
            max_batch=backend.max_batch,
            cache=cache,
        )

    @staticmethod
    def _log_retry(retry_state) -> None:
        logger.warning(
            "scorer_retry",
            attempt=retry_state.attempt_number,
            error=str(retry_state.outcome.exception()),
        )

    def _score_chunk(self, pairs: Sequence[Pair]) -> List[float]:
        return self._retrying.copy()(self._post, pairs)

    def _post(self, pairs: Sequence[Pair]) -> List[float]:
        metrics = get_metrics()
        body = {"pairs": [{"premise": premise, "claim": claim} for premise, claim in pairs]}
        start = time.perf_counter()
        try:
            response = self._session.post(self.url, json=body, timeout=self.timeout)
        except (requests.ConnectionError, requests.Timeout) as e:
            metrics.record_round_trip("transport_error")
            raise TransportError(f"请求失败: {e}", endpoint=self.url) from e
        except requests.RequestException as e:
            metrics.record_round_trip("protocol_error")
            raise ProtocolError(f"请求无效: {e}", endpoint=self.url) from e

        latency = time.perf_counter() - start
        status = response.status_code
        if status == 429 or status >= 500:
            metrics.record_round_trip("transport_error", latency)
            raise TransportError(f"服务返回 HTTP {status}", endpoint=self.url, status=status)
        if status >= 400:
            metrics.record_round_trip("protocol_error", latency)
            raise ProtocolError(f"服务返回 HTTP {status}", endpoint=self.url, status=status)

        try:
            payload = response.json()
        except ValueError as e:
            metrics.record_round_trip("protocol_error", latency)
            raise ProtocolError("响应不是合法的 JSON", endpoint=self.url) from e

        scores = self._parse_scores(payload, len(pairs))
        metrics.record_round_trip("success", latency)
        return scores

    def _parse_scores(self, payload: Any, expected: int) -> List[float]:
        if not isinstance(payload, dict) or not isinstance(payload.get("scores"), list):
            raise ProtocolError("响应缺少 scores 列表", endpoint=self.url)
        raw = payload["scores"]
        if len(raw) != expected:
            raise ProtocolError(f"scores 长度 {len(raw)} 与请求数量 {expected} 不一致", endpoint=self.url)

        scores: List[float] = []
        for position, value in enumerate(raw):
            if isinstance(value, bool) or not isinstance(value, (int, float)) or math.isnan(value):
                raise ProtocolError(f"第 {position} 个分数无效: {value!r}", endpoint=self.url)
            value = float(value)
            if value < 0.0 or value > 1.0:
                clamped = min(1.0, max(0.0, value))
                logger.warning("scorer_score_clamped", raw=value, clamped=clamped, position=position)
                get_metrics().record_clamp()
                value = clamped
            scores.append(value)
        return scores

    def close(self) -> None:
        self._session.close()
