"""
JSONL 数据集读写

样本记录格式（每行一个 UTF-8 JSON 对象）:
    {"id": str, "text": str, "propositions": [str] | [[str], ...], "grouped": bool, "meta": {...}}

预测文件使用同样的格式，text 字段可省略。
"""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from src.core.errors import ApsError, DatasetFormatError
from src.core.types import DatasetExample, Passage, PropositionSet
from src.utils.helpers import atomic_write_jsonl

PathLike = Union[str, Path]


def read_jsonl(path: PathLike) -> List[Dict[str, Any]]:
    """
    读取 JSONL 文件，跳过空行

    Raises:
        FileNotFoundError: 文件不存在
        DatasetFormatError: 某一行不是 JSON 对象
    """
    file_path = Path(path)
    rows: List[Dict[str, Any]] = []
    with file_path.open("r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as e:
                raise DatasetFormatError(f"JSON 解析失败: {e.msg}", path=str(file_path), line=line_no) from e
            if not isinstance(row, dict):
                raise DatasetFormatError("每行必须是 JSON 对象", path=str(file_path), line=line_no)
            rows.append(row)
    return rows


def propositions_from_record(record: Dict[str, Any], line: Optional[int] = None) -> PropositionSet:
    """从记录的 propositions / grouped 字段构建 PropositionSet"""
    raw = record.get("propositions")
    grouped = bool(record.get("grouped", False))
    if not isinstance(raw, list):
        raise DatasetFormatError("propositions 字段必须是列表", id=record.get("id"), line=line)
    try:
        if grouped:
            if not all(isinstance(g, list) for g in raw):
                raise DatasetFormatError("grouped=true 时 propositions 必须是列表的列表", id=record.get("id"), line=line)
            return PropositionSet.grouped([[str(t) for t in g] for g in raw])
        if not all(isinstance(t, str) for t in raw):
            raise DatasetFormatError("grouped=false 时 propositions 必须是字符串列表", id=record.get("id"), line=line)
        return PropositionSet.ungrouped(raw)
    except DatasetFormatError:
        raise
    except ApsError as e:
        raise DatasetFormatError(e.message, id=record.get("id"), line=line) from e


def example_from_record(record: Dict[str, Any], line: Optional[int] = None) -> DatasetExample:
    """把一条 JSONL 记录转换为 DatasetExample"""
    example_id = record.get("id")
    text = record.get("text")
    if not isinstance(example_id, str) or not example_id:
        raise DatasetFormatError("缺少 id 字段", line=line)
    if not isinstance(text, str):
        raise DatasetFormatError("缺少 text 字段", id=example_id, line=line)
    meta = record.get("meta") or {}
    if not isinstance(meta, dict):
        raise DatasetFormatError("meta 字段必须是对象", id=example_id, line=line)
    return DatasetExample(
        passage=Passage.from_text(example_id, text),
        gold=propositions_from_record(record, line),
        meta={str(k): str(v) for k, v in meta.items()},
    )


def example_to_record(example: DatasetExample, **extra: Any) -> Dict[str, Any]:
    """把 DatasetExample 转换为 JSONL 记录（extra 中的键追加到记录中）"""
    record: Dict[str, Any] = {
        "id": example.id,
        "text": example.passage.text,
        "propositions": example.gold.group_texts() if example.gold.is_grouped else example.gold.texts(),
        "grouped": example.gold.is_grouped,
        "meta": dict(example.meta),
    }
    record.update(extra)
    return record


def prediction_to_record(example_id: str, props: PropositionSet) -> Dict[str, Any]:
    return {
        "id": example_id,
        "propositions": props.group_texts() if props.is_grouped else props.texts(),
        "grouped": props.is_grouped,
    }


def load_examples(path: PathLike) -> List[DatasetExample]:
    """
    加载数据集

    Raises:
        DatasetFormatError: 记录无效或 id 重复
    """
    examples: List[DatasetExample] = []
    seen = set()
    for line_no, record in enumerate(read_jsonl(path), start=1):
        example = example_from_record(record, line_no)
        if example.id in seen:
            raise DatasetFormatError("id 重复", id=example.id, path=str(path))
        seen.add(example.id)
        examples.append(example)
    return examples


def load_predictions(path: PathLike) -> Dict[str, PropositionSet]:
    """加载预测文件，返回 id -> PropositionSet（按 id 与标注数据关联，不依赖行序）"""
    predictions: Dict[str, PropositionSet] = {}
    for line_no, record in enumerate(read_jsonl(path), start=1):
        example_id = record.get("id")
        if not isinstance(example_id, str) or not example_id:
            raise DatasetFormatError("缺少 id 字段", path=str(path), line=line_no)
        if example_id in predictions:
            raise DatasetFormatError("id 重复", id=example_id, path=str(path))
        predictions[example_id] = propositions_from_record(record, line_no)
    return predictions


def write_examples(path: PathLike, examples: Iterable[DatasetExample]) -> Path:
    return atomic_write_jsonl(path, (example_to_record(e) for e in examples))


def write_predictions(path: PathLike, predictions: Iterable[Tuple[str, PropositionSet]]) -> Path:
    return atomic_write_jsonl(path, (prediction_to_record(i, p) for i, p in predictions))
