"""
少样本提示基线

从训练池中选出 k 个示例（按 ROUGE-1 F 值与查询最相似，或按种子随机抽取），
拼成 指令 + 示例 + 查询 的提示词，以温度 0 调用生成服务，按不分组格式解析输出。
"""

import asyncio
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from rouge_score import rouge_scorer

from src.config.settings import FormatConfig
from src.core.types import DatasetExample, PropositionSet
from src.formats.errors import FormatError
from src.formats.training_format import DEFAULT_FORMAT, parse_ungrouped_output
from src.synthgen.generation_client import GenerationClient, GenerationError, GenerationRequest
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

STRATEGIES = ("rouge1", "random")


def select_fewshot_examples(
    query_text: str,
    pool: Sequence[DatasetExample],
    k: int = 10,
    strategy: str = "rouge1",
    seed: int = 0,
) -> List[DatasetExample]:
    """
    从训练池中选出 k 个示例

    Args:
        query_text: 查询段落
        pool: 候选示例
        k: 示例数（超过池大小时返回整个池）
        strategy: "rouge1" 按 ROUGE-1 F 值降序（同分按池中顺序），"random" 按种子随机抽取
        seed: 随机种子

    Raises:
        ValueError: 未知的 strategy 或 k < 0
    """
    if k < 0:
        raise ValueError(f"k 不能为负数: {k}")
    if strategy not in STRATEGIES:
        raise ValueError(f"不支持的选择策略: {strategy}，支持的策略: {list(STRATEGIES)}")
    k = min(k, len(pool))
    if strategy == "random":
        return random.Random(seed).sample(list(pool), k)

    scorer = rouge_scorer.RougeScorer(["rouge1"])
    scored = [
        (scorer.score(query_text, example.passage.text)["rouge1"].fmeasure, position)
        for position, example in enumerate(pool)
    ]
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [pool[position] for _, position in scored[:k]]


def build_fewshot_prompt(
    examples: Sequence[DatasetExample],
    query_text: str,
    cfg: FormatConfig = DEFAULT_FORMAT,
) -> str:
    """
    构建少样本提示词

    格式：
        {instruction}

        Passage: ...
        Propositions:
        - ...

        Passage: {query}
        Propositions:
    """
    blocks = [cfg.instruction]
    for example in examples:
        bullets = "\n".join(cfg.bullet + text for text in example.gold.texts())
        blocks.append(f"Passage: {example.passage.text}\nPropositions:\n{bullets}")
    blocks.append(f"Passage: {query_text}\nPropositions:\n")
    return "\n\n".join(blocks)


@dataclass
class FewshotResult:
    predictions: List[Tuple[str, PropositionSet]] = field(default_factory=list)
    failures: List[Tuple[str, str]] = field(default_factory=list)


async def run_fewshot(
    client: GenerationClient,
    pool: Sequence[DatasetExample],
    queries: Sequence[DatasetExample],
    k: int = 10,
    strategy: str = "rouge1",
    seed: int = 0,
    cfg: FormatConfig = DEFAULT_FORMAT,
    temperature: float = 0.0,
    concurrency: int = 8,
    max_attempts: int = 4,
) -> FewshotResult:
    """对每条查询生成命题预测，结果与失败项都按查询顺序排列"""
    semaphore = asyncio.Semaphore(concurrency)

    async def _predict(query: DatasetExample) -> Tuple[Optional[PropositionSet], Optional[str]]:
        examples = select_fewshot_examples(
            query.passage.text,
            [e for e in pool if e.id != query.id],
            k=k,
            strategy=strategy,
            seed=seed,
        )
        request = GenerationRequest(
            prompt=build_fewshot_prompt(examples, query.passage.text, cfg),
            temperature=temperature,
            max_attempts=max_attempts,
        )
        try:
            async with semaphore:
                raw = await client.generate(request, purpose="fewshot")
            return parse_ungrouped_output(raw, cfg), None
        except (FormatError, GenerationError) as e:
            logger.warning("fewshot_prediction_failed", example_id=query.id, error=str(e))
            return None, str(e)

    outcomes = await asyncio.gather(*(_predict(q) for q in queries))

    result = FewshotResult()
    for query, (prediction, error) in zip(queries, outcomes):
        if prediction is not None:
            result.predictions.append((query.id, prediction))
        else:
            result.failures.append((query.id, error))
    logger.info("fewshot_finished", predictions=len(result.predictions), failures=len(result.failures))
    return result
