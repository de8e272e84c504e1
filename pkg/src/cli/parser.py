"""
命令行参数定义

    aps [--config PATH] [--log-level LEVEL] [--log-file PATH] <command> ...

未给出的参数保持 None，由 ToolConfig 的默认值（Settings / 配置文件）决定。
"""

import argparse
from pathlib import Path

from src import __version__
from src.cli import commands
from src.synthgen.prompts import Length


def _scorer_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("打分器")
    group.add_argument("--scorer", choices=["oracle", "remote"], help="蕴含打分后端")
    group.add_argument("--endpoint", help="远程打分服务地址（也可用 APS_SCORER_ENDPOINT）")
    group.add_argument(
        "--strict",
        action="store_const",
        const=True,
        default=None,
        help="词汇 oracle 使用全有或全无的严格模式",
    )
    return parent


def _run_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--concurrency", type=int, help="最大并发数")
    parent.add_argument("--seed", type=int, help="随机种子")
    return parent


def _generation_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("生成服务")
    group.add_argument("--provider", choices=["http", "openai", "anthropic"], help="生成服务提供商")
    group.add_argument("--gen-endpoint", dest="gen_endpoint", help="生成服务地址（也可用 APS_GEN_ENDPOINT）")
    group.add_argument("--model", help="模型名")
    group.add_argument("--checkpoint-every", dest="checkpoint_every", type=int, help="每 N 次成功调用写一次检查点")
    return parent


def _io(parser: argparse.ArgumentParser, input_help: str, output_help: str = None) -> None:
    parser.add_argument("--input", type=Path, required=True, help=input_help)
    if output_help:
        parser.add_argument("--output", type=Path, required=True, help=output_help)


def _add_synth(subparsers, run: argparse.ArgumentParser, gen: argparse.ArgumentParser) -> None:
    synth = subparsers.add_parser("synth", help="合成多领域数据与蒸馏样本")
    synth.set_defaults(handler=commands.cmd_synth)
    synth_sub = synth.add_subparsers(dest="synth_command", required=True)
    lengths = [length.value for length in Length]

    domains = synth_sub.add_parser("domains", parents=[run, gen], help="生成新领域名")
    domains.add_argument("--seeds", type=Path, required=True, help="种子样本 JSONL")
    domains.add_argument("--n-calls", dest="n_calls", type=int, required=True, help="领域提示词调用次数")
    domains.add_argument("--allowlist", type=Path, help="领域白名单（每行一个）")
    domains.add_argument("--checkpoint", type=Path, help="检查点文件")
    domains.add_argument("--output", type=Path, required=True, help="领域列表输出（每行一个）")

    texts = synth_sub.add_parser("texts", parents=[run, gen], help="按 (领域, 长度) 生成文本")
    texts.add_argument("--seeds", type=Path, required=True, help="种子样本 JSONL")
    texts.add_argument("--domains", type=Path, required=True, help="领域列表（每行一个）")
    texts.add_argument("--texts-per-pair", dest="texts_per_pair", type=int, default=1)
    texts.add_argument("--lengths", nargs="+", choices=lengths, default=lengths)
    texts.add_argument("--checkpoint", type=Path, help="检查点文件")
    texts.add_argument("--output", type=Path, required=True, help="文本 JSONL 输出")

    corpus = synth_sub.add_parser("corpus", parents=[run, gen], help="领域 → 文本 → n-gram 过滤 一次完成")
    corpus.add_argument("--seeds", type=Path, required=True, help="种子样本 JSONL")
    corpus.add_argument("--n-calls", dest="n_calls", type=int, required=True, help="领域提示词调用次数")
    corpus.add_argument("--allowlist", type=Path, help="领域白名单（每行一个）")
    corpus.add_argument("--texts-per-pair", dest="texts_per_pair", type=int, default=1)
    corpus.add_argument("--lengths", nargs="+", choices=lengths, default=lengths)
    corpus.add_argument("--n", dest="ngram_n", type=int, help="过滤用的 n-gram 长度")
    corpus.add_argument("--checkpoint", type=Path, help="检查点文件")
    corpus.add_argument("--output", type=Path, required=True, help="保留文本 JSONL 输出")
    corpus.add_argument("--dropped", type=Path, help="被过滤文本 JSONL 输出")

    filt = synth_sub.add_parser("filter", help="过滤与种子文本有 n-gram 重叠的文本")
    _io(filt, "文本 JSONL", "保留文本 JSONL 输出")
    filt.add_argument("--seeds", type=Path, required=True, help="种子样本 JSONL")
    filt.add_argument("--n", dest="ngram_n", type=int, help="n-gram 长度（默认 4）")
    filt.add_argument("--dropped", type=Path, help="被过滤文本 JSONL 输出")

    distill = synth_sub.add_parser("distill", parents=[run, gen], help="用教师模型标注分组命题")
    _io(distill, "文本 JSONL", "训练样本 JSONL 输出")
    distill.add_argument("--teacher-id", dest="teacher_id", help="写入记录的教师标识（默认为模型名）")
    distill.add_argument("--temperature", type=float, default=0.0)
    distill.add_argument("--quarantine", type=Path, help="隔离的教师输出 JSONL")

    fewshot = synth_sub.add_parser("fewshot", parents=[run, gen], help="少样本提示基线")
    _io(fewshot, "待预测数据集 JSONL", "预测 JSONL 输出")
    fewshot.add_argument("--pool", type=Path, required=True, help="示例池（训练集）JSONL")
    fewshot.add_argument("--k", type=int, default=10)
    fewshot.add_argument("--strategy", choices=["rouge1", "random"], default="rouge1")
    fewshot.add_argument("--errors", type=Path, help="失败项 JSONL")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aps", description="抽象命题切分工具集")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="JSON 配置文件（结构与 ToolConfig 一致）")
    parser.add_argument("--log-level", dest="log_level", help="日志级别（默认读取 LOG_LEVEL）")
    parser.add_argument("--log-file", dest="log_file", help="JSON 日志文件")

    scorer = _scorer_options()
    run = _run_options()
    gen = _generation_options()
    subparsers = parser.add_subparsers(dest="command", required=True)

    evaluate = subparsers.add_parser("evaluate", parents=[scorer, run], help="计算 RF/RB 指标")
    evaluate.add_argument("--predictions", type=Path, required=True, help="预测 JSONL")
    evaluate.add_argument("--dataset", type=Path, required=True, help="标注数据集 JSONL")
    evaluate.add_argument("--report", type=Path, help="报告 JSON 输出")
    evaluate.add_argument("--per-example", dest="per_example", type=Path, help="逐样本报告 JSONL 输出")
    evaluate.add_argument("--metrics-out", dest="metrics_out", type=Path, help="运行计数器文本输出")
    evaluate.set_defaults(handler=commands.cmd_evaluate)

    baseline = subparsers.add_parser("baseline", help="句子基线预测")
    _io(baseline, "数据集 JSONL", "预测 JSONL 输出")
    baseline.set_defaults(handler=commands.cmd_baseline)

    correlate = subparsers.add_parser("correlate", help="指标与人工评分的 Pearson 相关")
    _io(correlate, "{metric, metric_value, human_judgment} JSONL")
    correlate.set_defaults(handler=commands.cmd_correlate)

    render = subparsers.add_parser("render", help="渲染训练格式")
    _io(render, "数据集 JSONL", "训练样本 JSONL 输出")
    render.add_argument("--mode", choices=["grouped", "ungrouped"], default="grouped")
    render.add_argument("--errors", type=Path, help="失败项 JSONL")
    render.set_defaults(handler=commands.cmd_render)

    parse_output = subparsers.add_parser("parse-output", help="解析模型输出为预测")
    _io(parse_output, "{id, output, ...} JSONL，或配合 --sentences 的纯文本模型输出", "预测 JSONL 输出")
    parse_output.add_argument("--mode", choices=["grouped", "ungrouped"], default="grouped")
    parse_output.add_argument("--sentences", type=int, help="输入为纯文本时，分组解析所需的句子数")
    parse_output.add_argument("--id", help="纯文本输入时写入预测的 id（默认为输入文件名）")
    parse_output.add_argument("--errors", type=Path, help="失败项 JSONL")
    parse_output.set_defaults(handler=commands.cmd_parse_output)

    align = subparsers.add_parser("align", parents=[scorer, run], help="ACU 归一化、去重与对齐过滤")
    _io(align, "原始数据集 JSONL", "对齐后的数据集 JSONL 输出")
    align.add_argument("--tau", type=float, help="对齐阈值（默认 0.9）")
    align.add_argument(
        "--discards",
        type=Path,
        help="被丢弃样本审计 JSONL（含 reason 与诊断信息，默认 <output>.discards.jsonl）",
    )
    align.add_argument("--errors", type=Path, help="出错样本 JSONL")
    align.set_defaults(handler=commands.cmd_align)

    split = subparsers.add_parser("split", parents=[run], help="训练/开发集划分")
    split.add_argument("--input", type=Path, required=True, help="数据集 JSONL")
    split.add_argument("--train", type=Path, required=True, help="训练集输出")
    split.add_argument("--dev", type=Path, required=True, help="开发集输出")
    split.add_argument("--dev-fraction", dest="dev_fraction", type=float, help="开发集比例")
    split.set_defaults(handler=commands.cmd_split)

    _add_synth(subparsers, run, gen)
    return parser
