"""评估指标相关异常"""

from typing import Any

from src.core.errors import ApsError, LengthMismatchError


class MetricError(ApsError):
    """指标计算基础异常类"""

    def __init__(self, message: str = "指标计算失败", **context: Any):
        super().__init__(message, **context)


class EmptyPredictions(MetricError):
    """预测命题集合为空（k' = 0）"""

    def __init__(self, message: str = "预测命题为空", **context: Any):
        super().__init__(message, **context)


class EmptyGold(MetricError):
    """标注命题集合为空（k = 0）"""

    def __init__(self, message: str = "标注命题为空", **context: Any):
        super().__init__(message, **context)


class LengthMismatch(MetricError, LengthMismatchError):
    """两个输入序列长度不一致"""

    def __init__(self, message: str = "输入长度不一致", **context: Any):
        super().__init__(message, **context)


class DegenerateInput(MetricError):
    """输入退化（常数序列或样本过少），相关系数无定义"""

    def __init__(self, message: str = "输入退化，相关系数无定义", **context: Any):
        super().__init__(message, **context)
