"""
分句与文本归一化

基于规则的确定性分句器：在 . ! ? 之后、空白之后紧跟大写字母/数字/引号处切分，
缩写表中的词和省略号不切分；姓名首字母（"J. Smith"）只在 keep_initials=True 时不切分。
归一化（小写、去标点、按空白切分）供词汇 oracle 打分器和 n-gram 过滤器共用。
"""

import unicodedata
from typing import FrozenSet, List

from src.core.types import Sentence

_TERMINALS = ".!?"
_CLOSERS = "\"')]}”’"
_OPENERS = "\"'“‘"
_TOKEN_PREFIX = "\"'“‘([{"

ABBREVIATIONS: FrozenSet[str] = frozenset(
    {
        "mr.", "mrs.", "ms.", "dr.", "prof.", "sr.", "jr.", "st.", "vs.", "etc.",
        "e.g.", "i.e.", "u.s.", "u.k.", "inc.", "ltd.", "co.", "corp.", "no.",
        "jan.", "feb.", "mar.", "apr.", "jun.", "jul.", "aug.", "sep.", "sept.",
        "oct.", "nov.", "dec.",
    }
)


def _is_abbreviation(text: str, start: int, period_at: int, keep_initials: bool) -> bool:
    """判断 period_at 处的句点是否属于缩写（keep_initials 时也包括姓名首字母）"""
    head = text[start:period_at]
    token = head.split()[-1] if head.split() else ""
    token = token.lstrip(_TOKEN_PREFIX)
    if not token:
        return False
    if (token + ".").lower() in ABBREVIATIONS:
        return True
    return keep_initials and len(token) == 1 and token.isupper()


def _is_boundary(text: str, start: int, run_start: int, run: str, after: int, keep_initials: bool) -> bool:
    n = len(text)
    if after >= n or not text[after].isspace():
        return False
    nxt = after
    while nxt < n and text[nxt].isspace():
        nxt += 1
    if nxt >= n:
        return False
    head = text[nxt]
    if not (head.isupper() or head.isdigit() or head in _OPENERS):
        return False
    if run.count(".") >= 2:
        return False
    if run == "." and _is_abbreviation(text, start, run_start, keep_initials):
        return False
    return True


def _skip_whitespace(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def split_sentences(text: str, keep_initials: bool = False) -> List[Sentence]:
    """
    将文本切分为句子

    句子之间的原始空白不属于任何句子，按区间拼回即可得到原文。

    Args:
        text: 输入文本
        keep_initials: 单个大写字母加句点（"J. Smith"）不作为句子边界；
            默认关闭，只使用固定缩写表，"vitamin C. It helps." 会切成两句

    Returns:
        句子列表（纯空白文本返回空列表）
    """
    sentences: List[Sentence] = []
    n = len(text)
    start = _skip_whitespace(text, 0)
    i = start
    while i < n:
        if text[i] not in _TERMINALS:
            i += 1
            continue
        run_end = i
        while run_end < n and text[run_end] in _TERMINALS:
            run_end += 1
        after = run_end
        while after < n and text[after] in _CLOSERS:
            after += 1
        if _is_boundary(text, start, i, text[i:run_end], after, keep_initials):
            sentences.append(Sentence(len(sentences), text[start:after], (start, after)))
            start = _skip_whitespace(text, after)
        i = after

    tail = text[start:].rstrip()
    if tail:
        end = start + len(tail)
        sentences.append(Sentence(len(sentences), tail, (start, end)))
    return sentences


def _strip_punctuation(text: str) -> str:
    return "".join(ch for ch in text if not unicodedata.category(ch).startswith("P"))


def tokenize(text: str) -> List[str]:
    """归一化并切分：小写 → 去掉所有 Unicode 标点 → 按空白切分"""
    return _strip_punctuation(text.lower()).split()


def token_set(text: str) -> FrozenSet[str]:
    """tokenize 结果的集合形式"""
    return frozenset(tokenize(text))
