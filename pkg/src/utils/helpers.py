import asyncio
import json
import os
import tempfile
import time
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Iterable, List, Sequence, TypeVar, Union

from src.utils.logging_config import get_logger

T = TypeVar("T")
R = TypeVar("R")

logger = get_logger(__name__)

PathLike = Union[str, Path]


def atomic_write_text(path: PathLike, content: str) -> Path:
    """原子写入文本文件

    先写入同目录下的临时文件，再用 os.replace 覆盖目标文件，
    中途失败时目标文件保持原样。

    Args:
        path: 目标文件路径
        content: 文本内容

    Returns:
        目标文件路径
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise
    return target


def dumps_json(obj: Any, indent: Union[int, None] = None) -> str:
    """统一的 JSON 序列化（保留非 ASCII 字符，键排序保证输出稳定）"""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=indent)


def atomic_write_json(path: PathLike, obj: Any) -> Path:
    """原子写入 JSON 文件"""
    return atomic_write_text(path, dumps_json(obj, indent=2) + "\n")


def atomic_write_jsonl(path: PathLike, rows: Iterable[Any]) -> Path:
    """原子写入 JSONL 文件（每行一个 JSON 对象）"""
    lines = [dumps_json(row) for row in rows]
    return atomic_write_text(path, "".join(line + "\n" for line in lines))


async def gather_bounded(
    func: Callable[[T], R],
    items: Sequence[T],
    concurrency: int = 1,
    return_exceptions: bool = False,
) -> List[Union[R, BaseException]]:
    """在线程池中以有限并发执行阻塞函数，结果顺序与输入一致

    Args:
        func: 阻塞函数（在 asyncio.to_thread 中执行）
        items: 输入列表
        concurrency: 最大并发数
        return_exceptions: 为 True 时异常作为结果返回而不是抛出

    Returns:
        与 items 一一对应的结果列表
    """
    if concurrency < 1:
        raise ValueError(f"concurrency 必须 >= 1，当前为 {concurrency}")

    semaphore = asyncio.Semaphore(concurrency)

    async def _run(item: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(func, item)

    return await asyncio.gather(*(_run(item) for item in items), return_exceptions=return_exceptions)


def run_bounded(
    func: Callable[[T], R],
    items: Sequence[T],
    concurrency: int = 1,
    return_exceptions: bool = False,
) -> List[Union[R, BaseException]]:
    """gather_bounded 的同步入口（concurrency=1 时直接顺序执行）"""
    if concurrency == 1:
        results: List[Union[R, BaseException]] = []
        for item in items:
            try:
                results.append(func(item))
            except Exception as e:
                if not return_exceptions:
                    raise
                results.append(e)
        return results
    return asyncio.run(gather_bounded(func, items, concurrency, return_exceptions))


def log_duration(event: str) -> Callable[[Callable[..., T]], Callable[..., T]]:
    """耗时记录装饰器

    装饰同步函数，执行结束后以 debug 级别记录耗时。

    Args:
        event: 日志事件名
    """

    def decorator(func: Callable[..., T]) -> Callable[..., T]:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> T:
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                logger.debug(event, function=func.__name__, seconds=round(time.perf_counter() - start, 4))

        return wrapper

    return decorator
