"""
多领域合成文本生成

流程：
    1. 多次调用领域提示词，收集新的领域名（与种子领域及已有结果去重，不区分大小写）
    2. 与人工挑选的领域白名单取交集（可选）
    3. 对每个 (领域, 长度) 生成若干文本
    4. 过滤与种子文本有 n-gram 重叠的文本

每个成功的调用都记入检查点，每 N 次成功调用由单独的写入任务落盘；
使用同一检查点重跑时已完成的调用直接跳过。
"""

import asyncio
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Awaitable, Callable, Dict, List, Optional, Sequence, Tuple, Union

import aiofiles

from src.config.settings import GenerationConfig
from src.core.errors import ApsError
from src.synthgen.generation_client import GenerationClient, GenerationRequest
from src.synthgen.ngram_filter import NgramIndex
from src.synthgen.prompts import Length, PromptBuilder, SeedExample, normalize_domain
from src.utils.helpers import dumps_json
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

LENGTH_ORDER = {Length.SHORT: 0, Length.PARAGRAPH: 1}


@dataclass(frozen=True)
class SyntheticText:
    """一条合成文本"""

    domain: str
    length: Length
    index: int
    text: str

    @property
    def key(self) -> str:
        return text_key(self.domain, self.length, self.index)

    @property
    def sort_key(self) -> Tuple[str, int, int]:
        return (self.domain, LENGTH_ORDER[self.length], self.index)

    def to_dict(self) -> Dict[str, Any]:
        return {"domain": self.domain, "length": self.length.value, "index": self.index, "text": self.text}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SyntheticText":
        return cls(
            domain=str(data["domain"]),
            length=Length(data["length"]),
            index=int(data.get("index", 0)),
            text=str(data["text"]),
        )


def text_key(domain: str, length: Length, index: int) -> str:
    return f"{domain}\t{Length(length).value}\t{index}"


@dataclass(frozen=True)
class CallFailure:
    stage: str
    key: str
    error: str

    def to_dict(self) -> Dict[str, str]:
        return {"stage": self.stage, "key": self.key, "error": self.error}


@dataclass
class CorpusResult:
    domains: List[str] = field(default_factory=list)
    kept: List[SyntheticText] = field(default_factory=list)
    dropped: List[SyntheticText] = field(default_factory=list)
    failures: List[CallFailure] = field(default_factory=list)


class Checkpoint:
    """生成进度：领域调用结果和已生成的文本"""

    def __init__(self):
        self.domain_calls: Dict[int, Optional[str]] = {}
        self.texts: Dict[str, str] = {}

    @classmethod
    def load(cls, path: Optional[Union[str, Path]]) -> "Checkpoint":
        checkpoint = cls()
        if path is None or not Path(path).exists():
            return checkpoint
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        checkpoint.domain_calls = {int(k): v for k, v in data.get("domain_calls", {}).items()}
        checkpoint.texts = dict(data.get("texts", {}))
        logger.info(
            "checkpoint_loaded",
            path=str(path),
            domain_calls=len(checkpoint.domain_calls),
            texts=len(checkpoint.texts),
        )
        return checkpoint

    def to_dict(self) -> Dict[str, Any]:
        return {
            "version": 1,
            "domain_calls": {str(k): v for k, v in sorted(self.domain_calls.items())},
            "texts": dict(sorted(self.texts.items())),
        }


class CheckpointWriter:
    """
    检查点写入器

    所有写入请求进入 asyncio.Queue，由唯一的后台任务顺序写盘（临时文件 + os.replace）。
    """

    def __init__(self, path: Optional[Union[str, Path]], checkpoint: Checkpoint, every: int = 100):
        self.path = Path(path) if path is not None else None
        self.checkpoint = checkpoint
        self.every = every
        self._since_flush = 0
        self._queue: "asyncio.Queue[Optional[str]]" = asyncio.Queue()
        self._task: Optional[asyncio.Task] = None
        self.writes = 0

    async def __aenter__(self) -> "CheckpointWriter":
        if self.path is not None:
            self._task = asyncio.create_task(self._run())
        return self

    async def __aexit__(self, *exc) -> None:
        if self._task is None:
            return
        self.flush()
        self._queue.put_nowait(None)
        await self._task

    def record_success(self) -> None:
        self._since_flush += 1
        if self._since_flush >= self.every:
            self.flush()

    def flush(self) -> None:
        if self._task is None:
            return
        self._since_flush = 0
        # 快照在事件循环线程中生成，内容与调用时刻一致
        self._queue.put_nowait(dumps_json(self.checkpoint.to_dict(), indent=2) + "\n")

    async def _run(self) -> None:
        while True:
            content = await self._queue.get()
            if content is None:
                break
            await self._write(content)

    async def _write(self, content: str) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.path.with_name(f".{self.path.name}.tmp")
        async with aiofiles.open(tmp, "w", encoding="utf-8") as f:
            await f.write(content)
        os.replace(tmp, self.path)
        self.writes += 1
        logger.debug("checkpoint_written", path=str(self.path), writes=self.writes)


async def _bounded(concurrency: int, jobs: Sequence[Callable[[], Awaitable[None]]]) -> None:
    semaphore = asyncio.Semaphore(concurrency)

    async def _run(job):
        async with semaphore:
            await job()

    await asyncio.gather(*(_run(job) for job in jobs))


class CorpusGenerator:
    """合成语料生成器"""

    def __init__(
        self,
        client: GenerationClient,
        seeds: Sequence[SeedExample],
        cfg: Optional[GenerationConfig] = None,
        checkpoint_path: Optional[Union[str, Path]] = None,
    ):
        if not seeds:
            raise ValueError("种子样本不能为空")
        self.client = client
        self.seeds = list(seeds)
        self.cfg = cfg or GenerationConfig()
        self.checkpoint_path = checkpoint_path
        self.checkpoint = Checkpoint.load(checkpoint_path)
        self.failures: List[CallFailure] = []

    async def _call(self, prompt: str, temperature: float, purpose: str) -> str:
        request = GenerationRequest(prompt=prompt, temperature=temperature, max_attempts=self.cfg.max_attempts)
        return await self.client.generate(request, purpose=purpose)

    def _fail(self, stage: str, key: str, error: Exception) -> None:
        logger.warning("generation_call_failed", stage=stage, key=key, error=str(error))
        self.failures.append(CallFailure(stage, key, str(error)))

    async def discover_domains(
        self,
        n_calls: int,
        allowlist: Optional[Sequence[str]] = None,
        writer: Optional[CheckpointWriter] = None,
    ) -> List[str]:
        """
        调用 n_calls 次领域提示词，返回去重后的新领域（按调用序号排序）

        Args:
            n_calls: 调用次数
            allowlist: 领域白名单，提供时只保留白名单中的领域
            writer: 检查点写入器
        """
        prompt = PromptBuilder.build_domain_prompt(self.seeds)

        async def _job(call_index: int) -> None:
            try:
                response = await self._call(prompt, self.cfg.domain_temperature, "domain")
            except ApsError as e:
                self._fail("domain", str(call_index), e)
                return
            self.checkpoint.domain_calls[call_index] = PromptBuilder.parse_domain_response(response)
            if writer is not None:
                writer.record_success()

        todo = [i for i in range(n_calls) if i not in self.checkpoint.domain_calls]
        await _bounded(self.cfg.concurrency, [lambda i=i: _job(i) for i in todo])

        seen = {normalize_domain(s.domain) for s in self.seeds}
        allowed = {normalize_domain(d) for d in allowlist} if allowlist is not None else None
        domains: List[str] = []
        for call_index in range(n_calls):
            domain = self.checkpoint.domain_calls.get(call_index)
            if not domain:
                continue
            key = normalize_domain(domain)
            if key in seen:
                continue
            seen.add(key)
            if allowed is not None and key not in allowed:
                continue
            domains.append(domain)
        logger.info("domains_discovered", calls=n_calls, distinct=len(domains))
        return domains

    async def generate_texts(
        self,
        domains: Sequence[str],
        texts_per_pair: int = 1,
        lengths: Sequence[Length] = (Length.SHORT, Length.PARAGRAPH),
        writer: Optional[CheckpointWriter] = None,
    ) -> List[SyntheticText]:
        """对每个 (领域, 长度) 生成 texts_per_pair 条文本，按 (领域, 长度, 序号) 排序返回"""
        jobs: List[Tuple[str, Length, int]] = [
            (domain, Length(length), index)
            for domain in domains
            for length in lengths
            for index in range(texts_per_pair)
        ]

        async def _job(domain: str, length: Length, index: int) -> None:
            key = text_key(domain, length, index)
            prompt = PromptBuilder.build_text_prompt(self.seeds, domain, length)
            try:
                response = await self._call(prompt, self.cfg.text_temperature, "text")
            except ApsError as e:
                self._fail("text", key, e)
                return
            text = PromptBuilder.parse_text_response(response)
            if text is None:
                self._fail("text", key, ValueError("生成的文本为空"))
                return
            self.checkpoint.texts[key] = text
            if writer is not None:
                writer.record_success()

        todo = [job for job in jobs if text_key(*job) not in self.checkpoint.texts]
        await _bounded(self.cfg.concurrency, [lambda job=job: _job(*job) for job in todo])

        records = [
            SyntheticText(domain, length, index, self.checkpoint.texts[text_key(domain, length, index)])
            for domain, length, index in jobs
            if text_key(domain, length, index) in self.checkpoint.texts
        ]
        return sorted(records, key=lambda r: r.sort_key)

    def filter_overlap(self, records: Sequence[SyntheticText], n: int = 4) -> Tuple[List[SyntheticText], List[SyntheticText]]:
        """丢弃与种子文本有 n-gram 重叠的记录"""
        index = NgramIndex([s.text for s in self.seeds], n)
        kept: List[SyntheticText] = []
        dropped: List[SyntheticText] = []
        for record in records:
            (dropped if index.overlaps(record.text) else kept).append(record)
        return kept, dropped

    async def run(
        self,
        n_domain_calls: int,
        allowlist: Optional[Sequence[str]] = None,
        texts_per_pair: int = 1,
        lengths: Sequence[Length] = (Length.SHORT, Length.PARAGRAPH),
        ngram_n: int = 4,
    ) -> CorpusResult:
        async with CheckpointWriter(self.checkpoint_path, self.checkpoint, self.cfg.checkpoint_every) as writer:
            domains = await self.discover_domains(n_domain_calls, allowlist, writer)
            records = await self.generate_texts(domains, texts_per_pair, lengths, writer)
        kept, dropped = self.filter_overlap(records, ngram_n)
        logger.info(
            "corpus_generated",
            domains=len(domains),
            texts=len(records),
            kept=len(kept),
            dropped=len(dropped),
            failures=len(self.failures),
        )
        return CorpusResult(domains=domains, kept=kept, dropped=dropped, failures=list(self.failures))


async def generate_corpus(
    client: GenerationClient,
    seeds: Sequence[SeedExample],
    n_domain_calls: int,
    manual_domain_allowlist: Optional[Sequence[str]] = None,
    texts_per_pair: int = 1,
    cfg: Optional[GenerationConfig] = None,
    checkpoint_path: Optional[Union[str, Path]] = None,
    ngram_n: int = 4,
) -> CorpusResult:
    """
    生成多领域合成语料

    Args:
        client: 生成服务客户端
        seeds: 种子样本
        n_domain_calls: 领域提示词调用次数
        manual_domain_allowlist: 人工挑选的领域白名单
        texts_per_pair: 每个 (领域, 长度) 的文本数
        cfg: 生成配置（并发、温度、检查点间隔）
        checkpoint_path: 检查点文件路径，存在时从中恢复
        ngram_n: 过滤用的 n-gram 长度
    """
    generator = CorpusGenerator(client, seeds, cfg, checkpoint_path)
    return await generator.run(n_domain_calls, manual_domain_allowlist, texts_per_pair, ngram_n=ngram_n)
