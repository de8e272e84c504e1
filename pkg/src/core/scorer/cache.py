"""
打分缓存

以 (sha256(premise), sha256(claim)) 为键的 LRU 缓存，同时保存完整字符串，
命中时校验原文，哈希碰撞按未命中处理。内部加锁，可被多个工作线程共享。
"""

import hashlib
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional, Tuple

from src.monitoring.metrics import get_metrics


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CacheStats:
    hits: int
    misses: int
    size: int


class ScoreCache:
    """LRU 打分缓存（capacity 为 0 时不缓存任何内容）"""

    def __init__(self, capacity: int = 100_000):
        if capacity < 0:
            raise ValueError(f"缓存容量不能为负数: {capacity}")
        self.capacity = capacity
        self._entries: "OrderedDict[Tuple[str, str], Tuple[str, str, float]]" = OrderedDict()
        self._lock = threading.Lock()
        self._hits = 0
        self._misses = 0

    def get(self, premise: str, claim: str) -> Optional[float]:
        key = (_digest(premise), _digest(claim))
        with self._lock:
            entry = self._entries.get(key)
            if entry is not None and entry[0] == premise and entry[1] == claim:
                self._entries.move_to_end(key)
                self._hits += 1
                hit = True
            else:
                self._misses += 1
                hit = False
        get_metrics().record_cache(hit)
        return entry[2] if hit else None

    def put(self, premise: str, claim: str, score: float) -> None:
        if self.capacity == 0:
            return
        key = (_digest(premise), _digest(claim))
        with self._lock:
            self._entries[key] = (premise, claim, score)
            self._entries.move_to_end(key)
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self._hits = 0
            self._misses = 0

    def stats(self) -> CacheStats:
        with self._lock:
            return CacheStats(hits=self._hits, misses=self._misses, size=len(self._entries))

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)
