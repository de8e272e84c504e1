"""
合成数据提示词模板

负责:
1. 把种子样本序列化为 few-shot 块（Domain:/Length:/Text: 三行，块之间空行分隔）
2. 生成新领域 / 新文本的提示词
3. 解析生成服务的响应
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from src.core.dataset_io import read_jsonl
from src.core.errors import DatasetFormatError

PROMPT_HEADER = "Below are example passages, each labeled with its source domain and its length."
MAX_DOMAIN_LENGTH = 80


class Length(str, Enum):
    """文本长度：short（一到几句话）或 paragraph（一段）"""

    SHORT = "short"
    PARAGRAPH = "paragraph"


@dataclass(frozen=True)
class SeedExample:
    """种子样本 (domain, length, text)"""

    domain: str
    length: Length
    text: str

    def __post_init__(self):
        if not self.domain or not self.domain.strip():
            raise ValueError("种子样本的 domain 不能为空")
        if not self.text or not self.text.strip():
            raise ValueError("种子样本的 text 不能为空")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SeedExample":
        return cls(domain=str(data.get("domain", "")), length=Length(data.get("length")), text=str(data.get("text", "")))

    def to_dict(self) -> Dict[str, str]:
        return {"domain": self.domain, "length": self.length.value, "text": self.text}


def load_seeds(path: Union[str, Path]) -> List[SeedExample]:
    """
    加载种子文件（JSONL: {"domain", "length", "text"}）

    Raises:
        DatasetFormatError: 记录无效
    """
    seeds: List[SeedExample] = []
    for line_no, row in enumerate(read_jsonl(path), start=1):
        try:
            seeds.append(SeedExample.from_dict(row))
        except ValueError as e:
            raise DatasetFormatError(f"种子样本无效: {e}", path=str(path), line=line_no) from e
    return seeds


def normalize_domain(domain: str) -> str:
    """领域名的比较键：小写并合并空白"""
    return " ".join(domain.lower().split())


class PromptBuilder:
    """合成数据提示词构建器"""

    @staticmethod
    def format_block(seed: SeedExample) -> str:
        return f"Domain: {seed.domain}\nLength: {seed.length.value}\nText: {seed.text}"

    @staticmethod
    def _examples_section(seeds: Sequence[SeedExample]) -> str:
        if not seeds:
            raise ValueError("种子样本不能为空")
        blocks = "\n\n".join(PromptBuilder.format_block(s) for s in seeds)
        return f"{PROMPT_HEADER}\n\n{blocks}"

    @staticmethod
    def build_domain_prompt(seeds: Sequence[SeedExample]) -> str:
        """
        构建生成新领域名的提示词

        Args:
            seeds: 种子样本（按输入顺序序列化）

        Returns:
            以 "Domain:" 结尾的提示词，由模型补全一个新的领域名
        """
        return f"{PromptBuilder._examples_section(seeds)}\n\nDomain:"

    @staticmethod
    def build_text_prompt(seeds: Sequence[SeedExample], domain: str, length: Length) -> str:
        """
        构建在指定领域和长度下生成文本的提示词

        Returns:
            以 "Domain: {domain}\\nLength: {length}\\nText:" 结尾的提示词
        """
        if not domain or not domain.strip():
            raise ValueError("domain 不能为空")
        return f"{PromptBuilder._examples_section(seeds)}\n\nDomain: {domain}\nLength: {Length(length).value}\nText:"

    @staticmethod
    def parse_domain_response(response_text: str) -> Optional[str]:
        """
        从响应中取出领域名（第一行非空文本）

        Returns:
            领域名，无法解析时返回 None
        """
        for line in response_text.splitlines():
            candidate = line.strip()
            if not candidate:
                continue
            if candidate.lower().startswith("domain:"):
                candidate = candidate[len("domain:"):].strip()
            candidate = candidate.strip(" .\"'")
            if not candidate or len(candidate) > MAX_DOMAIN_LENGTH:
                return None
            return candidate
        return None

    @staticmethod
    def parse_text_response(response_text: str) -> Optional[str]:
        """
        从响应中取出生成的文本，模型继续写出下一个示例块时截断

        Returns:
            文本，为空时返回 None
        """
        text = response_text
        marker = text.find("\nDomain:")
        if marker >= 0:
            text = text[:marker]
        text = text.strip()
        return text or None


def build_domain_prompt(seeds: Sequence[SeedExample]) -> str:
    return PromptBuilder.build_domain_prompt(seeds)


def build_text_prompt(seeds: Sequence[SeedExample], domain: str, length: Length) -> str:
    return PromptBuilder.build_text_prompt(seeds, domain, length)
