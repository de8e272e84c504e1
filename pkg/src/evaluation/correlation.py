"""
指标与人工评分的 Pearson 相关系数
"""

from collections import OrderedDict
from typing import Any, Dict, List, Mapping, Sequence, Tuple

import numpy as np

from src.core.errors import DatasetFormatError
from src.evaluation.errors import DegenerateInput, LengthMismatch


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """
    计算样本 Pearson 相关系数

    Args:
        xs: 指标值
        ys: 人工评分

    Returns:
        [-1, 1] 之间的相关系数

    Raises:
        LengthMismatch: 长度不一致
        DegenerateInput: 样本少于 2 个或任一序列为常数
    """
    if len(xs) != len(ys):
        raise LengthMismatch(n_x=len(xs), n_y=len(ys))
    if len(xs) < 2:
        raise DegenerateInput("至少需要 2 个样本", n=len(xs))

    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if np.all(x == x[0]):
        raise DegenerateInput("指标值为常数", side="metric")
    if np.all(y == y[0]):
        raise DegenerateInput("人工评分为常数", side="human")

    r = float(np.corrcoef(x, y)[0, 1])
    return float(np.clip(r, -1.0, 1.0))


def collect_columns(rows: Sequence[Mapping[str, Any]]) -> "OrderedDict[str, Tuple[List[float], List[float]]]":
    """
    把 JSONL 行按指标名整理为 (指标值列, 人工评分列)

    支持两种行格式：
        {"metric": str, "metric_value": float, "human_judgment": float}
        {"metric": str, "metric_values": [float], "human_judgments": [float]}

    Raises:
        DatasetFormatError: 行缺少字段
        LengthMismatch: 列格式中两列长度不一致
    """
    columns: "OrderedDict[str, Tuple[List[float], List[float]]]" = OrderedDict()
    for line_no, row in enumerate(rows, start=1):
        name = row.get("metric")
        if not isinstance(name, str) or not name:
            raise DatasetFormatError("缺少 metric 字段", line=line_no)
        xs, ys = columns.setdefault(name, ([], []))
        if "metric_values" in row or "human_judgments" in row:
            values = row.get("metric_values") or []
            judgments = row.get("human_judgments") or []
            if len(values) != len(judgments):
                raise LengthMismatch(metric=name, line=line_no, n_x=len(values), n_y=len(judgments))
            xs.extend(float(v) for v in values)
            ys.extend(float(v) for v in judgments)
        elif "metric_value" in row and "human_judgment" in row:
            xs.append(float(row["metric_value"]))
            ys.append(float(row["human_judgment"]))
        else:
            raise DatasetFormatError("缺少 metric_value/human_judgment 字段", metric=name, line=line_no)
    return columns


def correlate_rows(rows: Sequence[Mapping[str, Any]]) -> Dict[str, float]:
    """对每个指标名计算 Pearson 相关系数，按指标首次出现的顺序返回"""
    return OrderedDict((name, pearson(xs, ys)) for name, (xs, ys) in collect_columns(rows).items())
