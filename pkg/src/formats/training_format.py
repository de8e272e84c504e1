"""
训练/推理格式

不分组格式:
    输入  = 指令 + "\\n" + 段落原文
    目标  = 每个命题前加项目符号，换行分隔，例如 "- A.\\n- B."
分组格式:
    输入  = 指令 + "\\n" + 每个句子包在起止标记中，例如 "<s>S1</s><s>S2</s>"
    目标  = 每个句子的命题列表包在同样的标记中，例如 "<s>- A.</s><s>- B.\\n- C.</s>"

解析是严格的：任何格式问题都抛出带偏移量或组号的异常，不做修复。
"""

import re
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from src.config.settings import FormatConfig
from src.core.types import DatasetExample, GroupingMode, Passage, PropositionSet
from src.formats.errors import (
    EmptyGold,
    EmptyGroup,
    FormatError,
    GroupCountMismatch,
    NoPropositionsFound,
    TokenCollision,
    UnbalancedTokens,
)

DEFAULT_FORMAT = FormatConfig()


@dataclass(frozen=True)
class TrainingRecord:
    """一条训练样本（输入文本, 目标文本）"""

    input_text: str
    target_text: str
    mode: GroupingMode
    source_id: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input": self.input_text,
            "target": self.target_text,
            "mode": self.mode.value,
            "source_id": self.source_id,
        }


def _check_text(text: str, cfg: FormatConfig, allow_newline: bool = False, **context: Any) -> None:
    for token in (cfg.start_token, cfg.end_token):
        if token in text:
            raise TokenCollision(f"文本包含特殊标记 {token!r}", text=text, **context)
    if not allow_newline and "\n" in text:
        raise TokenCollision("命题文本不能包含换行", text=text, **context)


def _bullet_list(texts: Sequence[str], cfg: FormatConfig, **context: Any) -> str:
    for position, text in enumerate(texts):
        _check_text(text, cfg, position=position, **context)
        # 解析时会去掉首尾空白，渲染时必须拒绝
        if text != text.strip():
            raise TokenCollision("命题文本首尾不能有空白", text=text, position=position, **context)
    return "\n".join(cfg.bullet + text for text in texts)


def render_ungrouped(passage: Passage, gold: PropositionSet, cfg: FormatConfig = DEFAULT_FORMAT) -> TrainingRecord:
    """
    渲染不分组训练样本

    Raises:
        EmptyGold: 标注为空
        TokenCollision: 命题文本包含特殊标记或换行
    """
    if len(gold) == 0:
        raise EmptyGold(source_id=passage.id)
    return TrainingRecord(
        input_text=f"{cfg.instruction}\n{passage.text}",
        target_text=_bullet_list(gold.texts(), cfg, source_id=passage.id),
        mode=GroupingMode.UNGROUPED,
        source_id=passage.id,
    )


def render_grouped_input(passage: Passage, cfg: FormatConfig = DEFAULT_FORMAT) -> str:
    """渲染分组格式的输入文本（指令 + 包在起止标记中的句子）"""
    for sentence in passage.sentences:
        _check_text(sentence.text, cfg, allow_newline=True, source_id=passage.id, sentence=sentence.index)
    wrapped = "".join(f"{cfg.start_token}{s.text}{cfg.end_token}" for s in passage.sentences)
    return f"{cfg.instruction}\n{wrapped}"


def render_grouped(passage: Passage, gold: PropositionSet, cfg: FormatConfig = DEFAULT_FORMAT) -> TrainingRecord:
    """
    渲染分组训练样本

    Raises:
        FormatError: 标注不是分组模式
        GroupCountMismatch: 分组数与句子数不一致
        EmptyGroup: 某个句子没有命题
        TokenCollision: 文本包含特殊标记
    """
    if not gold.is_grouped:
        raise FormatError("分组格式要求标注为分组模式", source_id=passage.id)
    if len(gold.groups) != passage.n_sentences:
        raise GroupCountMismatch(source_id=passage.id, expected=passage.n_sentences, found=len(gold.groups))
    for g, group in enumerate(gold.groups):
        if not group:
            raise EmptyGroup(source_id=passage.id, group=g)

    target = "".join(
        f"{cfg.start_token}{_bullet_list([p.text for p in group], cfg, source_id=passage.id, group=g)}{cfg.end_token}"
        for g, group in enumerate(gold.groups)
    )
    return TrainingRecord(
        input_text=render_grouped_input(passage, cfg),
        target_text=target,
        mode=GroupingMode.GROUPED,
        source_id=passage.id,
    )


def render_records(
    examples: Iterable[DatasetExample],
    mode: GroupingMode,
    cfg: FormatConfig = DEFAULT_FORMAT,
) -> List[TrainingRecord]:
    """批量渲染；不分组模式使用展平后的标注，分组模式要求标注已分组"""
    records: List[TrainingRecord] = []
    for example in examples:
        if mode == GroupingMode.GROUPED:
            records.append(render_grouped(example.passage, example.gold, cfg))
        else:
            records.append(render_ungrouped(example.passage, example.gold.to_ungrouped(), cfg))
    return records


def _token_pattern(cfg: FormatConfig) -> "re.Pattern[str]":
    tokens = sorted({cfg.start_token, cfg.end_token}, key=len, reverse=True)
    return re.compile("|".join(re.escape(t) for t in tokens))


def _scan_groups(raw: str, cfg: FormatConfig, allow_prefix: bool) -> List[Tuple[int, str]]:
    """
    扫描起止标记，返回 [(组内容起始偏移, 组内容), ...]

    组与组之间只允许空白；allow_prefix 为 True 时第一个起始标记之前可以有任意文本（指令）。
    """
    matches = list(_token_pattern(cfg).finditer(raw))
    n_start = sum(1 for m in matches if m.group() == cfg.start_token)
    n_end = len(matches) - n_start
    if n_start != n_end:
        offending = matches[-1].start() if matches else 0
        raise UnbalancedTokens(
            f"起始标记 {n_start} 个，结束标记 {n_end} 个",
            offset=offending,
            n_start=n_start,
            n_end=n_end,
        )

    groups: List[Tuple[int, str]] = []
    cursor = 0
    open_at: Optional[int] = None
    for m in matches:
        if m.group() == cfg.start_token:
            if open_at is not None:
                raise UnbalancedTokens("起始标记重复出现（上一个分组未结束）", offset=m.start())
            between = raw[cursor:m.start()]
            if between.strip() and not (allow_prefix and not groups):
                raise UnbalancedTokens("分组之外出现了文本", offset=cursor)
            open_at = m.end()
        else:
            if open_at is None:
                raise UnbalancedTokens("结束标记之前没有起始标记", offset=m.start())
            groups.append((open_at, raw[open_at:m.start()]))
            open_at = None
            cursor = m.end()

    if raw[cursor:].strip() and groups:
        raise UnbalancedTokens("最后一个分组之后出现了文本", offset=cursor)
    return groups


def _bullet_text(line: str, bullet: str) -> Optional[str]:
    """返回项目符号行去掉符号后的文本；不是项目符号行时返回 None"""
    stripped = line.strip()
    marker = bullet.strip()
    lead = bullet.lstrip()
    if stripped.startswith(lead):
        return stripped[len(lead):].strip()
    if stripped == marker:
        return ""
    return None


def _bullet_lines(content: str, cfg: FormatConfig) -> List[str]:
    texts: List[str] = []
    for line in content.split("\n"):
        text = _bullet_text(line.rstrip(), cfg.bullet)
        if text:
            texts.append(text)
    return texts


def parse_grouped_output(raw: str, n_sentences: int, cfg: FormatConfig = DEFAULT_FORMAT) -> PropositionSet:
    """
    严格解析分组格式的模型输出

    Args:
        raw: 模型输出文本
        n_sentences: 输入段落的句子数
        cfg: 格式配置

    Returns:
        分组模式的 PropositionSet，第 g 组的 sentence_index 为 g

    Raises:
        UnbalancedTokens: 起止标记数量不一致、未交替或分组外有文本
        GroupCountMismatch: 分组数与 n_sentences 不一致
        EmptyGroup: 某个分组没有命题
    """
    if n_sentences < 1:
        raise FormatError("n_sentences 必须 >= 1", n_sentences=n_sentences)
    groups = _scan_groups(raw, cfg, allow_prefix=False)
    if len(groups) != n_sentences:
        raise GroupCountMismatch(expected=n_sentences, found=len(groups))

    parsed: List[List[str]] = []
    for g, (offset, content) in enumerate(groups):
        texts = _bullet_lines(content, cfg)
        if not texts:
            raise EmptyGroup(group=g, offset=offset)
        parsed.append(texts)
    return PropositionSet.grouped(parsed)


def parse_ungrouped_output(raw: str, cfg: FormatConfig = DEFAULT_FORMAT) -> PropositionSet:
    """
    解析不分组格式的模型输出：只保留项目符号行

    Raises:
        NoPropositionsFound: 没有任何非空的项目符号行
    """
    texts = _bullet_lines(raw, cfg)
    if not texts:
        raise NoPropositionsFound(length=len(raw))
    return PropositionSet.ungrouped(texts)


def validate_grouped_input(input_text: str, cfg: FormatConfig = DEFAULT_FORMAT) -> int:
    """
    校验分组格式输入（指令之后的句子必须严格包在起止标记中）

    Returns:
        句子数

    Raises:
        UnbalancedTokens: 标记不匹配或没有任何句子
    """
    groups = _scan_groups(input_text, cfg, allow_prefix=True)
    if not groups:
        raise UnbalancedTokens("输入中没有任何句子标记", offset=0)
    return len(groups)
