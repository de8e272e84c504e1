"""
Structlog 日志配置模块

提供结构化日志功能，支持 JSON 输出和控制台格式化输出。
命令行的结果输出占用 stdout，所有日志统一写到 stderr。
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Union

import structlog


def _resolve_level(log_level: Union[str, int]) -> int:
    if isinstance(log_level, int):
        return log_level
    return getattr(logging, str(log_level).upper(), logging.INFO)


def setup_structlog(log_level: Union[str, int] = "INFO", log_file: Optional[str] = None):
    """
    配置 structlog

    Args:
        log_level: 日志级别 (DEBUG, INFO, WARNING, ERROR, CRITICAL) 或 logging 整数常量
        log_file: 日志文件路径（可选，设置后以 JSON 行格式写入文件）
    """
    level = _resolve_level(log_level)

    # 配置标准库 logging，重复调用时替换已有的处理器
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    logging.basicConfig(format="%(message)s", level=level, stream=sys.stderr)

    processors = [
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        # 格式化为 JSON（写文件）或美化输出（终端）
        structlog.processors.JSONRenderer() if log_file else structlog.dev.ConsoleRenderer(colors=False),
    ]

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(level)
        file_handler.setFormatter(logging.Formatter("%(message)s"))  # structlog 已格式化
        root.addHandler(file_handler)

    return structlog.get_logger()


def get_logger(name: Optional[str] = None):
    """
    获取结构化日志器

    Args:
        name: 日志器名称（通常是模块名）

    Returns:
        structlog.BoundLogger
    """
    return structlog.get_logger(name)
