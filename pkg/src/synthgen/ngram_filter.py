"""
n-gram 重叠过滤

与种子文本共享至少一个连续 n 词序列的候选文本被丢弃。
分词与词汇 oracle 打分器一致：小写 → 去标点 → 按空白切分。
"""

from typing import Iterable, List, Sequence, Set, Tuple

from src.core.segmentation import tokenize

NGram = Tuple[str, ...]


def ngrams(tokens: Sequence[str], n: int) -> Set[NGram]:
    """返回 tokens 中所有连续 n 元组（长度不足 n 时为空集合）"""
    return {tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)}


class NgramIndex:
    """种子文本的 n-gram 索引"""

    def __init__(self, seeds: Iterable[str], n: int = 4):
        if n < 1:
            raise ValueError(f"n 必须 >= 1，当前为 {n}")
        self.n = n
        self._grams: Set[NGram] = set()
        for seed in seeds:
            self._grams |= ngrams(tokenize(seed), n)

    def overlaps(self, text: str) -> bool:
        tokens = tokenize(text)
        return any(tuple(tokens[i:i + self.n]) in self._grams for i in range(len(tokens) - self.n + 1))

    def __len__(self) -> int:
        return len(self._grams)


def ngram_overlap_filter(candidates: Sequence[str], seeds: Sequence[str], n: int = 4) -> Tuple[List[str], List[str]]:
    """
    按 n-gram 重叠划分候选文本

    Args:
        candidates: 候选文本
        seeds: 种子文本
        n: n-gram 长度

    Returns:
        (保留, 丢弃)，两部分都保持输入顺序

    Raises:
        ValueError: n < 1
    """
    index = NgramIndex(seeds, n)
    kept: List[str] = []
    dropped: List[str] = []
    for candidate in candidates:
        (dropped if index.overlaps(candidate) else kept).append(candidate)
    return kept, dropped
