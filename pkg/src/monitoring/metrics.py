"""
Prometheus 指标收集器

为 APS 工具集提供运行时计数：打分请求、缓存命中、对齐结果、生成调用等。
指标注册在私有的 CollectorRegistry 上，多次创建实例（例如测试中）不会冲突。
"""

import logging
import threading
from typing import Optional

from prometheus_client import CollectorRegistry, Counter, Histogram, Info, generate_latest

logger = logging.getLogger(__name__)


class ApsMetrics:
    """APS 工具集指标收集器"""

    def __init__(self, registry: Optional[CollectorRegistry] = None):
        """初始化所有Prometheus指标"""
        self.registry = registry or CollectorRegistry()

        # === 工具信息 ===
        self.tool_info = Info("aps_tool", "Tool information", registry=self.registry)
        self.tool_info.info({"version": "1.0.0", "application": "aps-toolkit"})

        # === 蕴含打分 ===
        # 打分请求(按后端和状态分类)
        self.scorer_requests = Counter(
            "aps_scorer_requests_total",
            "Total number of scored pairs",
            ["backend", "status"],
            registry=self.registry,
        )

        # 远程往返次数
        self.remote_round_trips = Counter(
            "aps_scorer_remote_round_trips_total",
            "Total number of remote scorer HTTP round trips",
            ["status"],
            registry=self.registry,
        )

        # 远程往返延迟
        self.remote_latency = Histogram(
            "aps_scorer_remote_latency_seconds",
            "Remote scorer round trip latency in seconds",
            buckets=(0.05, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0),
            registry=self.registry,
        )

        # 超出 [0,1] 被截断的分数
        self.clamped_scores = Counter(
            "aps_scorer_clamped_scores_total",
            "Remote scores clamped into [0, 1]",
            registry=self.registry,
        )

        # === 缓存 ===
        self.cache_hits = Counter("aps_cache_hits_total", "Score cache hits", registry=self.registry)
        self.cache_misses = Counter("aps_cache_misses_total", "Score cache misses", registry=self.registry)

        # === 流水线 ===
        self.alignment_outcomes = Counter(
            "aps_alignment_outcomes_total",
            "Alignment outcomes by status",
            ["status"],
            registry=self.registry,
        )

        self.examples_evaluated = Counter(
            "aps_examples_evaluated_total",
            "Examples evaluated by status",
            ["status"],
            registry=self.registry,
        )

        # === 生成 ===
        self.generation_calls = Counter(
            "aps_generation_calls_total",
            "Generation service calls",
            ["provider", "purpose", "status"],
            registry=self.registry,
        )

        self.quarantined_outputs = Counter(
            "aps_quarantined_teacher_outputs_total",
            "Teacher outputs rejected by the strict parser",
            ["error_type"],
            registry=self.registry,
        )

    def record_scored(self, backend: str, status: str, count: int = 1):
        """记录打分请求"""
        if count > 0:
            self.scorer_requests.labels(backend=backend, status=status).inc(count)

    def record_round_trip(self, status: str, latency: float = None):
        """记录远程往返"""
        self.remote_round_trips.labels(status=status).inc()
        if latency is not None:
            self.remote_latency.observe(latency)

    def record_clamp(self):
        """记录截断事件"""
        self.clamped_scores.inc()

    def record_cache(self, hit: bool):
        """记录缓存访问"""
        if hit:
            self.cache_hits.inc()
        else:
            self.cache_misses.inc()

    def record_alignment(self, status: str):
        """记录对齐结果"""
        self.alignment_outcomes.labels(status=status).inc()

    def record_evaluation(self, status: str):
        """记录样本评估结果（ok / error）"""
        self.examples_evaluated.labels(status=status).inc()

    def record_generation(self, provider: str, purpose: str, status: str):
        """
        记录生成服务调用

        Args:
            provider: 生成服务提供商（http, openai, anthropic）
            purpose: 调用目的（domain, text, distill, fewshot）
            status: 状态（success, error）
        """
        self.generation_calls.labels(provider=provider, purpose=purpose, status=status).inc()

    def record_quarantine(self, error_type: str):
        """记录被隔离的教师输出"""
        self.quarantined_outputs.labels(error_type=error_type).inc()

    def get_metrics(self) -> bytes:
        """获取Prometheus格式的指标数据"""
        return generate_latest(self.registry)


# 全局指标实例
_metrics: Optional[ApsMetrics] = None
_metrics_lock = threading.Lock()


def get_metrics() -> ApsMetrics:
    """获取全局指标实例"""
    global _metrics
    if _metrics is None:
        # 打分在工作线程中进行，首次创建需要加锁
        with _metrics_lock:
            if _metrics is None:
                _metrics = ApsMetrics()
    return _metrics


def reset_metrics():
    """重置指标(用于测试)"""
    global _metrics
    with _metrics_lock:
        _metrics = None
