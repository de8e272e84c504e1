"""训练格式渲染与解析相关异常，每个异常都指明出错的偏移量或组号"""

from typing import Any

from src.core.errors import ApsError


class FormatError(ApsError):
    """格式基础异常类"""

    def __init__(self, message: str = "格式无效", **context: Any):
        super().__init__(message, **context)


class UnbalancedTokens(FormatError):
    """句子起止标记数量不一致或未严格交替"""

    def __init__(self, message: str = "起止标记不匹配", **context: Any):
        super().__init__(message, **context)


class GroupCountMismatch(FormatError):
    """分组数量与句子数量不一致"""

    def __init__(self, message: str = "分组数量与句子数量不一致", **context: Any):
        super().__init__(message, **context)


class EmptyGroup(FormatError):
    """某个分组没有任何命题"""

    def __init__(self, message: str = "分组为空", **context: Any):
        super().__init__(message, **context)


class NoPropositionsFound(FormatError):
    """输出中没有任何以项目符号开头的行"""

    def __init__(self, message: str = "没有找到命题", **context: Any):
        super().__init__(message, **context)


class TokenCollision(FormatError):
    """文本中包含特殊标记或换行，无法无歧义地解析"""

    def __init__(self, message: str = "文本包含特殊标记", **context: Any):
        super().__init__(message, **context)


class EmptyGold(FormatError):
    """标注命题为空，无法渲染训练目标"""

    def __init__(self, message: str = "标注命题为空", **context: Any):
        super().__init__(message, **context)
