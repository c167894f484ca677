"""
系统信息与并行工具
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, TypeVar

import psutil

from cubulate.core.errors import SizeError

logger = logging.getLogger(__name__)

T = TypeVar("T")
U = TypeVar("U")

# 至少保留的可用内存比例
MEMORY_HEADROOM = 0.2


def default_threads() -> int:
    """--threads 的默认值：物理核数，取不到时退回逻辑核数"""
    return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1


def get_system_info() -> Dict:
    """获取系统信息"""
    memory = psutil.virtual_memory()
    return {
        "cpu_count": psutil.cpu_count(),
        "cpu_physical": psutil.cpu_count(logical=False),
        "memory_total": memory.total,
        "memory_available": memory.available,
        "memory_percent": memory.percent,
    }


def ensure_memory_headroom(nbytes: int, what: str) -> None:
    """申请 nbytes 之后可用内存仍需保留 MEMORY_HEADROOM 的比例，否则抛 SizeError"""
    memory = psutil.virtual_memory()
    budget = memory.available - MEMORY_HEADROOM * memory.total
    if nbytes > budget:
        raise SizeError(
            f"{what} 需要约 {nbytes / 2**20:.1f} MiB，可用内存不足",
            count=nbytes,
            census={"available": memory.available, "total": memory.total},
        )
    logger.debug("%s: 预计 %.1f MiB，可用 %.1f MiB", what, nbytes / 2**20, memory.available / 2**20)


def parallel_map(func: Callable[[T], U], items: Iterable[T], threads: Optional[int] = None) -> List[U]:
    """按输入顺序返回结果；threads ≤ 1 时直接串行"""
    items = list(items)
    workers = default_threads() if threads is None else threads
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items))


__all__ = ["default_threads", "get_system_info", "ensure_memory_headroom", "parallel_map", "MEMORY_HEADROOM"]
