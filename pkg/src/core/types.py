"""
核心领域类型

Passage / Sentence / Proposition / PropositionSet / DatasetExample。
所有类型构造后不可变，可以在并发任务之间安全共享。
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.core.errors import ApsError


class GroupingMode(str, Enum):
    """命题集合的组织方式"""

    UNGROUPED = "ungrouped"
    GROUPED = "grouped"


@dataclass(frozen=True)
class Sentence:
    """段落中的一个句子

    Attributes:
        index: 在 Passage.sentences 中的位置（从 0 开始）
        text: 句子文本，等于 Passage.text[span[0]:span[1]]
        span: 字符区间 (start, end)，左闭右开
    """

    index: int
    text: str
    span: Tuple[int, int]


@dataclass(frozen=True)
class Passage:
    """输入文本及其分句结果"""

    id: str
    text: str
    sentences: Tuple[Sentence, ...]

    def __post_init__(self):
        for position, sentence in enumerate(self.sentences):
            start, end = sentence.span
            if sentence.index != position:
                raise ApsError("句子序号与位置不一致", passage_id=self.id, index=sentence.index)
            if self.text[start:end] != sentence.text:
                raise ApsError("句子区间与文本不一致", passage_id=self.id, index=sentence.index)

    @classmethod
    def from_text(cls, passage_id: str, text: str) -> "Passage":
        """对文本分句后构建 Passage"""
        from src.core.segmentation import split_sentences

        return cls(id=passage_id, text=text, sentences=tuple(split_sentences(text)))

    @property
    def n_sentences(self) -> int:
        return len(self.sentences)

    @property
    def is_empty(self) -> bool:
        return not self.sentences

    def sentence_texts(self) -> List[str]:
        return [s.text for s in self.sentences]


@dataclass(frozen=True)
class Proposition:
    """一个命题（预测或标注）

    sentence_index 只在分组解析或对齐之后才存在。
    """

    text: str
    sentence_index: Optional[int] = None

    def __post_init__(self):
        if not self.text or not self.text.strip():
            raise ApsError("命题文本不能为空")
        if self.sentence_index is not None and self.sentence_index < 0:
            raise ApsError("sentence_index 不能为负数", sentence_index=self.sentence_index)


@dataclass(frozen=True)
class PropositionSet:
    """命题集合

    不分组模式固定为一个组，组内命题没有 sentence_index；
    分组模式下第 g 组只包含 sentence_index == g 的命题。
    """

    mode: GroupingMode
    groups: Tuple[Tuple[Proposition, ...], ...]

    def __post_init__(self):
        if self.mode == GroupingMode.UNGROUPED:
            if len(self.groups) != 1:
                raise ApsError("不分组模式必须恰好包含一个组", n_groups=len(self.groups))
            if any(p.sentence_index is not None for p in self.groups[0]):
                raise ApsError("不分组模式的命题不能带 sentence_index")
        else:
            for g, group in enumerate(self.groups):
                for p in group:
                    if p.sentence_index != g:
                        raise ApsError("分组命题的 sentence_index 与组号不一致", group=g, sentence_index=p.sentence_index)

    @classmethod
    def ungrouped(cls, texts: Iterable[str]) -> "PropositionSet":
        """由文本列表构建不分组集合"""
        return cls(GroupingMode.UNGROUPED, (tuple(Proposition(t) for t in texts),))

    @classmethod
    def grouped(cls, groups: Iterable[Iterable[str]]) -> "PropositionSet":
        """由每句的文本列表构建分组集合"""
        return cls(
            GroupingMode.GROUPED,
            tuple(tuple(Proposition(t, g) for t in group) for g, group in enumerate(groups)),
        )

    @classmethod
    def from_propositions(cls, props: Sequence[Proposition], n_sentences: int) -> "PropositionSet":
        """按 sentence_index 把已对齐的命题装入 n_sentences 个组，组内保持输入顺序"""
        buckets: List[List[Proposition]] = [[] for _ in range(n_sentences)]
        for p in props:
            if p.sentence_index is None or p.sentence_index >= n_sentences:
                raise ApsError("命题缺少有效的 sentence_index", text=p.text, sentence_index=p.sentence_index)
            buckets[p.sentence_index].append(p)
        return cls(GroupingMode.GROUPED, tuple(tuple(b) for b in buckets))

    @property
    def is_grouped(self) -> bool:
        return self.mode == GroupingMode.GROUPED

    def flatten(self) -> List[Proposition]:
        return [p for group in self.groups for p in group]

    def texts(self) -> List[str]:
        return [p.text for group in self.groups for p in group]

    def group_texts(self) -> List[List[str]]:
        return [[p.text for p in group] for group in self.groups]

    def to_ungrouped(self) -> "PropositionSet":
        return PropositionSet.ungrouped(self.texts())

    def __len__(self) -> int:
        return sum(len(group) for group in self.groups)


def concat_propositions(props: PropositionSet) -> str:
    """把命题按顺序以单个空格拼接（空集合返回空串）"""
    return " ".join(props.texts())


@dataclass(frozen=True)
class DatasetExample:
    """数据集中的一条样本：段落 + 标注命题 + 元信息"""

    passage: Passage
    gold: PropositionSet
    meta: Dict[str, str] = field(default_factory=dict)

    @property
    def id(self) -> str:
        return self.passage.id
