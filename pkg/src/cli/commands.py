"""
命令行子命令实现

每个 cmd_* 接收解析后的参数和 ToolConfig，返回退出码：
    0  成功
    1  部分样本出错（其余结果照常写出）
    2  配置或文件错误（由 main 统一处理）

命令结果写到 stdout，日志写到 stderr；所有输出文件原子写入。
"""

import argparse
import asyncio
from pathlib import Path
from typing import Any, Dict, List, Sequence

from src.config.settings import ToolConfig
from src.core.dataset_io import (
    example_to_record,
    load_examples,
    load_predictions,
    read_jsonl,
    write_examples,
    write_predictions,
)
from src.core.errors import ApsError, EmptyInputError
from src.core.scorer import ScorerFactory
from src.core.types import GroupingMode, Passage
from src.evaluation.correlation import collect_columns, pearson
from src.evaluation.errors import DegenerateInput
from src.evaluation.metrics import evaluate_corpus_detailed, format_report_table, join_predictions, sentence_baseline
from src.formats.errors import FormatError
from src.formats.training_format import (
    parse_grouped_output,
    parse_ungrouped_output,
    render_records,
    validate_grouped_input,
)
from src.monitoring.metrics import get_metrics
from src.pipeline.rose import run_pipeline, split_train_dev
from src.synthgen.corpus import CheckpointWriter, CorpusGenerator, SyntheticText
from src.synthgen.distill import build_distillation_records
from src.synthgen.fewshot import run_fewshot
from src.synthgen.generation_client import GenerationClientFactory
from src.synthgen.ngram_filter import NgramIndex
from src.synthgen.prompts import Length, load_seeds
from src.utils.helpers import atomic_write_json, atomic_write_jsonl, atomic_write_text, dumps_json
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ITEM_ERRORS = 1
EXIT_CONFIG_ERROR = 2

# 命令行参数名 -> ToolConfig 中的路径
_OVERRIDES = {
    "scorer": ("scorer.kind",),
    "endpoint": ("scorer.endpoint",),
    "strict": ("scorer.strict",),
    "tau": ("alignment.tau",),
    "seed": ("seed",),
    "concurrency": ("concurrency", "generation.concurrency"),
    "dev_fraction": ("dev_fraction",),
    "ngram_n": ("ngram_n",),
    "provider": ("generation.provider",),
    "gen_endpoint": ("generation.endpoint",),
    "model": ("generation.model",),
    "checkpoint_every": ("generation.checkpoint_every",),
    "input": ("paths.input",),
    "output": ("paths.output",),
    "report": ("paths.report",),
}

# 其余读写路径，统一交给 PathsConfig 检查互不相同
_EXTRA_INPUTS = ("dataset", "predictions", "pool", "seeds", "domains", "allowlist")
_EXTRA_OUTPUTS = (
    "train",
    "dev",
    "per_example",
    "metrics_out",
    "errors",
    "discards",
    "dropped",
    "quarantine",
    "checkpoint",
)

DISCARDS_SUFFIX = ".discards.jsonl"


def default_discards_path(output: Path) -> Path:
    """未指定 --discards 时的审计文件：<output 去掉后缀>.discards.jsonl"""
    return output.with_suffix(DISCARDS_SUFFIX)


def config_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """把命令行参数转换为 ToolConfig.load 的覆盖项（未给出的参数不覆盖）"""
    overrides: Dict[str, Any] = {}
    for name, targets in _OVERRIDES.items():
        value = getattr(args, name, None)
        if value is None:
            continue
        for target in targets:
            overrides[target] = value

    inputs = {name: getattr(args, name) for name in _EXTRA_INPUTS if getattr(args, name, None) is not None}
    outputs = {name: getattr(args, name) for name in _EXTRA_OUTPUTS if getattr(args, name, None) is not None}
    if hasattr(args, "discards") and args.discards is None and getattr(args, "output", None) is not None:
        outputs["discards"] = default_discards_path(args.output)
    if inputs:
        overrides["paths.inputs"] = inputs
    if outputs:
        overrides["paths.outputs"] = outputs
    return overrides


def _emit(text: str) -> None:
    print(text, flush=True)


def _emit_json(obj: Any) -> None:
    _emit(dumps_json(obj))


def _read_lines(path: Path) -> List[str]:
    return [line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def _failure_row(item_id: str, error: Exception) -> Dict[str, Any]:
    return {"id": item_id, "error_type": type(error).__name__, "message": str(error)}


# ---------------------------------------------------------------------------
# 评估
# ---------------------------------------------------------------------------


def cmd_evaluate(args: argparse.Namespace, cfg: ToolConfig) -> int:
    """按 id 关联预测与标注，计算语料级指标"""
    examples = load_examples(args.dataset)
    predictions = load_predictions(args.predictions)
    joined, preds, missing = join_predictions(examples, predictions)
    for example_id in missing:
        logger.warning("prediction_missing", example_id=example_id)
    if not joined:
        raise EmptyInputError("没有可评估的样本", dataset=str(args.dataset), predictions=str(args.predictions))

    with ScorerFactory.create(cfg.scorer) as scorer:
        evaluation = evaluate_corpus_detailed(joined, preds, scorer, cfg.concurrency)

    failures = [_failure_row(i, e) for i, e in evaluation.failures]
    if cfg.paths.report is not None:
        atomic_write_json(
            cfg.paths.report,
            {
                "report": evaluation.report.to_dict() if evaluation.report else None,
                "failures": failures,
                "missing": missing,
            },
        )
    if "per_example" in cfg.paths.outputs:
        atomic_write_jsonl(cfg.paths.outputs["per_example"], (r.to_dict() for r in evaluation.example_reports))
    if "metrics_out" in cfg.paths.outputs:
        atomic_write_text(cfg.paths.outputs["metrics_out"], get_metrics().get_metrics().decode("utf-8"))

    if evaluation.report is not None:
        _emit(format_report_table(evaluation.report))
    return EXIT_ITEM_ERRORS if failures or missing else EXIT_OK


def cmd_baseline(args: argparse.Namespace, cfg: ToolConfig) -> int:
    """句子基线：每个句子作为一个命题"""
    examples = load_examples(cfg.paths.input)
    if not examples:
        raise EmptyInputError("数据集为空", path=str(cfg.paths.input))
    predictions = []
    n_failed = 0
    for example in examples:
        try:
            predictions.append((example.id, sentence_baseline(example.passage)))
        except ApsError as e:
            n_failed += 1
            logger.warning("baseline_failed", example_id=example.id, error=str(e))
    write_predictions(cfg.paths.output, predictions)
    _emit_json({"written": len(predictions), "failed": n_failed})
    return EXIT_ITEM_ERRORS if n_failed else EXIT_OK


def cmd_correlate(args: argparse.Namespace, cfg: ToolConfig) -> int:
    """逐指标计算与人工评分的 Pearson 相关系数"""
    columns = collect_columns(read_jsonl(cfg.paths.input))
    if not columns:
        raise EmptyInputError("没有任何指标数据", path=str(cfg.paths.input))
    degenerate = False
    for name, (xs, ys) in columns.items():
        try:
            _emit(f"{name}\t{pearson(xs, ys):.6f}")
        except DegenerateInput as e:
            degenerate = True
            logger.error("correlation_refused", metric=name, error=str(e))
            _emit(f"{name}\t-")
    return EXIT_ITEM_ERRORS if degenerate else EXIT_OK


# ---------------------------------------------------------------------------
# 格式
# ---------------------------------------------------------------------------


def cmd_render(args: argparse.Namespace, cfg: ToolConfig) -> int:
    """把数据集渲染为训练格式"""
    mode = GroupingMode(args.mode)
    records = []
    failures = []
    for example in load_examples(cfg.paths.input):
        try:
            (record,) = render_records([example], mode, cfg.format)
        except FormatError as e:
            logger.warning("render_failed", example_id=example.id, error=str(e))
            failures.append(_failure_row(example.id, e))
            continue
        records.append(record.to_dict())
    atomic_write_jsonl(cfg.paths.output, records)
    if "errors" in cfg.paths.outputs:
        atomic_write_jsonl(cfg.paths.outputs["errors"], failures)
    _emit_json({"written": len(records), "failed": len(failures)})
    return EXIT_ITEM_ERRORS if failures else EXIT_OK


def _n_sentences_for(row: Dict[str, Any], cfg: ToolConfig) -> int:
    if isinstance(row.get("n_sentences"), int):
        return row["n_sentences"]
    if isinstance(row.get("input"), str):
        return validate_grouped_input(row["input"], cfg.format)
    if isinstance(row.get("text"), str):
        return Passage.from_text(str(row.get("id")), row["text"]).n_sentences
    raise FormatError("分组解析需要 n_sentences、input 或 text 字段", id=row.get("id"))


def _output_rows(args: argparse.Namespace, cfg: ToolConfig) -> List[Dict[str, Any]]:
    """给出 --sentences 时输入是一段纯文本模型输出，否则是 JSONL"""
    if args.sentences is None:
        return list(read_jsonl(cfg.paths.input))
    if args.sentences < 1:
        raise ValueError(f"--sentences 必须 >= 1: {args.sentences}")
    raw = cfg.paths.input.read_text(encoding="utf-8")
    return [{"id": args.id or cfg.paths.input.stem, "output": raw.strip("\n"), "n_sentences": args.sentences}]


def cmd_parse_output(args: argparse.Namespace, cfg: ToolConfig) -> int:
    """
    解析模型输出为预测文件

    JSONL 输入行格式：{"id", "output"}，分组模式还需要 n_sentences / input / text 之一；
    纯文本输入配合 --sentences N 使用
    """
    mode = GroupingMode(args.mode)
    predictions = []
    failures = []
    for line_no, row in enumerate(_output_rows(args, cfg), start=1):
        row_id = str(row.get("id", f"line-{line_no}"))
        try:
            raw = row.get("output")
            if not isinstance(raw, str):
                raise FormatError("缺少 output 字段", id=row_id, line=line_no)
            if mode == GroupingMode.GROUPED:
                props = parse_grouped_output(raw, _n_sentences_for(row, cfg), cfg.format)
            else:
                props = parse_ungrouped_output(raw, cfg.format)
        except FormatError as e:
            logger.warning("output_parse_failed", id=row_id, error=str(e))
            failures.append(_failure_row(row_id, e))
            continue
        predictions.append((row_id, props))
    write_predictions(cfg.paths.output, predictions)
    if "errors" in cfg.paths.outputs:
        atomic_write_jsonl(cfg.paths.outputs["errors"], failures)
    _emit_json({"parsed": len(predictions), "failed": len(failures)})
    return EXIT_ITEM_ERRORS if failures else EXIT_OK


# ---------------------------------------------------------------------------
# 数据集预处理
# ---------------------------------------------------------------------------


def cmd_align(args: argparse.Namespace, cfg: ToolConfig) -> int:
    """ACU 归一化、去重、命题-句子对齐与过滤"""
    raw = load_examples(cfg.paths.input)
    with ScorerFactory.create(cfg.alignment.scorer) as scorer:
        result = run_pipeline(raw, cfg.alignment, scorer, cfg.concurrency)

    write_examples(cfg.paths.output, result.kept)
    # 被丢弃的样本总是写入审计文件
    atomic_write_jsonl(
        cfg.paths.outputs["discards"],
        (
            example_to_record(example, reason=outcome.status.value, diagnostics=outcome.diagnostics.to_dict())
            for example, outcome in result.discarded
        ),
    )
    if "errors" in cfg.paths.outputs:
        atomic_write_jsonl(cfg.paths.outputs["errors"], (_failure_row(i, e) for i, e in result.errors))
    _emit_json(result.report)
    return EXIT_ITEM_ERRORS if result.errors else EXIT_OK


def cmd_split(args: argparse.Namespace, cfg: ToolConfig) -> int:
    """按种子随机划分训练集和开发集"""
    examples = load_examples(cfg.paths.input)
    train, dev = split_train_dev(examples, cfg.dev_fraction, cfg.seed)
    write_examples(cfg.paths.outputs["train"], train)
    write_examples(cfg.paths.outputs["dev"], dev)
    _emit_json({"train": len(train), "dev": len(dev), "seed": cfg.seed})
    return EXIT_OK


# ---------------------------------------------------------------------------
# 合成数据
# ---------------------------------------------------------------------------


def _generator(args: argparse.Namespace, cfg: ToolConfig, client) -> CorpusGenerator:
    return CorpusGenerator(client, load_seeds(args.seeds), cfg.generation, args.checkpoint)


def _load_texts(path: Path) -> List[SyntheticText]:
    return [SyntheticText.from_dict(row) for row in read_jsonl(path)]


def _lengths(args: argparse.Namespace) -> Sequence[Length]:
    return [Length(v) for v in args.lengths]


async def _synth_domains(args: argparse.Namespace, cfg: ToolConfig) -> int:
    allowlist = _read_lines(args.allowlist) if args.allowlist else None
    async with GenerationClientFactory.create(cfg.generation) as client:
        generator = _generator(args, cfg, client)
        async with CheckpointWriter(args.checkpoint, generator.checkpoint, cfg.generation.checkpoint_every) as writer:
            domains = await generator.discover_domains(args.n_calls, allowlist, writer)
    atomic_write_text(cfg.paths.output, "".join(d + "\n" for d in domains))
    _emit_json({"domains": len(domains), "failed_calls": len(generator.failures)})
    return EXIT_ITEM_ERRORS if generator.failures else EXIT_OK


async def _synth_texts(args: argparse.Namespace, cfg: ToolConfig) -> int:
    domains = _read_lines(args.domains)
    async with GenerationClientFactory.create(cfg.generation) as client:
        generator = _generator(args, cfg, client)
        async with CheckpointWriter(args.checkpoint, generator.checkpoint, cfg.generation.checkpoint_every) as writer:
            texts = await generator.generate_texts(domains, args.texts_per_pair, _lengths(args), writer)
    atomic_write_jsonl(cfg.paths.output, (t.to_dict() for t in texts))
    _emit_json({"texts": len(texts), "failed_calls": len(generator.failures)})
    return EXIT_ITEM_ERRORS if generator.failures else EXIT_OK


async def _synth_corpus(args: argparse.Namespace, cfg: ToolConfig) -> int:
    allowlist = _read_lines(args.allowlist) if args.allowlist else None
    async with GenerationClientFactory.create(cfg.generation) as client:
        generator = _generator(args, cfg, client)
        result = await generator.run(args.n_calls, allowlist, args.texts_per_pair, _lengths(args), cfg.ngram_n)
    atomic_write_jsonl(cfg.paths.output, (t.to_dict() for t in result.kept))
    if "dropped" in cfg.paths.outputs:
        atomic_write_jsonl(cfg.paths.outputs["dropped"], (t.to_dict() for t in result.dropped))
    _emit_json(
        {
            "domains": len(result.domains),
            "kept": len(result.kept),
            "dropped": len(result.dropped),
            "failed_calls": len(result.failures),
        }
    )
    return EXIT_ITEM_ERRORS if result.failures else EXIT_OK


def _synth_filter(args: argparse.Namespace, cfg: ToolConfig) -> int:
    texts = _load_texts(cfg.paths.input)
    index = NgramIndex([s.text for s in load_seeds(args.seeds)], cfg.ngram_n)
    kept: List[SyntheticText] = []
    dropped: List[SyntheticText] = []
    for text in texts:
        (dropped if index.overlaps(text.text) else kept).append(text)
    atomic_write_jsonl(cfg.paths.output, (t.to_dict() for t in kept))
    if "dropped" in cfg.paths.outputs:
        atomic_write_jsonl(cfg.paths.outputs["dropped"], (t.to_dict() for t in dropped))
    _emit_json({"kept": len(kept), "dropped": len(dropped), "n": cfg.ngram_n})
    return EXIT_OK


async def _synth_distill(args: argparse.Namespace, cfg: ToolConfig) -> int:
    texts = _load_texts(cfg.paths.input)
    async with GenerationClientFactory.create(cfg.generation) as client:
        result = await build_distillation_records(
            texts,
            client,
            cfg.format,
            teacher_id=args.teacher_id or cfg.generation.model,
            concurrency=cfg.generation.concurrency,
            temperature=args.temperature,
            max_attempts=cfg.generation.max_attempts,
        )
    atomic_write_jsonl(cfg.paths.output, (r.to_dict(cfg.format) for r in result.records))
    if "quarantine" in cfg.paths.outputs:
        atomic_write_jsonl(cfg.paths.outputs["quarantine"], (q.to_dict() for q in result.quarantined))
    _emit_json({"records": len(result.records), "quarantined": len(result.quarantined)})
    return EXIT_ITEM_ERRORS if result.quarantined else EXIT_OK


async def _synth_fewshot(args: argparse.Namespace, cfg: ToolConfig) -> int:
    pool = load_examples(args.pool)
    queries = load_examples(cfg.paths.input)
    async with GenerationClientFactory.create(cfg.generation) as client:
        result = await run_fewshot(
            client,
            pool,
            queries,
            k=args.k,
            strategy=args.strategy,
            seed=cfg.seed,
            cfg=cfg.format,
            temperature=cfg.generation.fewshot_temperature,
            concurrency=cfg.generation.concurrency,
            max_attempts=cfg.generation.max_attempts,
        )
    write_predictions(cfg.paths.output, result.predictions)
    if "errors" in cfg.paths.outputs:
        atomic_write_jsonl(cfg.paths.outputs["errors"], ({"id": i, "message": m} for i, m in result.failures))
    _emit_json({"predictions": len(result.predictions), "failed": len(result.failures)})
    return EXIT_ITEM_ERRORS if result.failures else EXIT_OK


_SYNTH_ASYNC = {
    "domains": _synth_domains,
    "texts": _synth_texts,
    "corpus": _synth_corpus,
    "distill": _synth_distill,
    "fewshot": _synth_fewshot,
}


def cmd_synth(args: argparse.Namespace, cfg: ToolConfig) -> int:
    """合成数据子命令分发"""
    if args.synth_command == "filter":
        return _synth_filter(args, cfg)
    return asyncio.run(_SYNTH_ASYNC[args.synth_command](args, cfg))


__all__ = [
    "EXIT_CONFIG_ERROR",
    "EXIT_ITEM_ERRORS",
    "EXIT_OK",
    "cmd_align",
    "cmd_baseline",
    "cmd_correlate",
    "cmd_evaluate",
    "cmd_parse_output",
    "cmd_render",
    "cmd_split",
    "cmd_synth",
    "config_overrides",
]
