"""
自定义异常基类

所有模块的异常都继承自 ApsError，携带消息和结构化上下文，
便于日志记录和命令行错误报告。
"""

from typing import Any, Dict


class ApsError(Exception):
    """APS 基础异常类"""

    def __init__(self, message: str, **context: Any):
        self.message = message
        self.context: Dict[str, Any] = {k: v for k, v in context.items() if v is not None}
        super().__init__(self.message)

    def with_context(self, **context: Any) -> "ApsError":
        """补充上下文信息（不覆盖已有的键），返回自身以便链式 raise"""
        for key, value in context.items():
            if value is not None:
                self.context.setdefault(key, value)
        return self

    def __str__(self):
        parts = [f"{self.__class__.__name__}: {self.message}"]
        for key, value in self.context.items():
            parts.append(f"{key}: {value}")
        return " | ".join(parts)


class EmptyInputError(ApsError):
    """输入为空"""

    def __init__(self, message: str = "输入为空", **context: Any):
        super().__init__(message, **context)


class LengthMismatchError(ApsError):
    """两个序列长度不一致"""

    def __init__(self, message: str = "长度不一致", **context: Any):
        super().__init__(message, **context)


class DatasetFormatError(ApsError):
    """数据文件格式错误（JSONL 行无法解析或字段缺失）"""

    def __init__(self, message: str = "数据格式无效", **context: Any):
        super().__init__(message, **context)
