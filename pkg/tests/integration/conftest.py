"""
集成测试共享工具

命令行入口每次运行都会重新配置日志处理器，测试结束后移除，
避免后续测试写入已关闭的 capsys 流。
"""

import json
import logging

import pytest


@pytest.fixture(autouse=True)
def detach_log_handlers():
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)


def write_jsonl(path, rows):
    path.write_text("".join(json.dumps(row, ensure_ascii=False) + "\n" for row in rows), encoding="utf-8")
    return path


def read_jsonl(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def table_cells(stdout):
    """取出指标表格的数据行（最后一行）的各列"""
    row = stdout.strip().splitlines()[-1]
    return [cell.strip() for cell in row.split("|")]
