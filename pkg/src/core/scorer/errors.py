"""
蕴含打分相关异常

TransportError 可重试（连接失败、超时、429/5xx），ProtocolError 不可重试（响应格式错误、其他 4xx）。
批量打分失败时通过 failing_index 报告出错的输入位置。
"""

from typing import Any

from src.core.errors import ApsError


class ScorerError(ApsError):
    """打分基础异常类"""

    def __init__(self, message: str = "打分失败", **context: Any):
        super().__init__(message, **context)

    @property
    def failing_index(self):
        return self.context.get("failing_index")


class TransportError(ScorerError):
    """远程服务不可达或超时（可重试）"""

    def __init__(self, message: str = "远程打分服务连接失败", **context: Any):
        super().__init__(message, **context)


class ProtocolError(ScorerError):
    """远程服务响应格式错误（不可重试）"""

    def __init__(self, message: str = "远程打分服务响应无效", **context: Any):
        super().__init__(message, **context)


class EmptyInput(ScorerError):
    """premise 或 claim 为空"""

    def __init__(self, message: str = "premise 和 claim 不能为空", **context: Any):
        super().__init__(message, **context)
