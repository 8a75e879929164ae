"""
Ordered fan-out over a thread pool
"""

from concurrent.futures import Future, ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, TypeVar

from config import INFERENCE_CONFIG

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: Optional[int]) -> int:
    value = INFERENCE_CONFIG["workers"] if workers is None else workers
    return max(1, int(value))


def map_ordered(func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """
    Apply ``func`` to every item, returning results in submission order.

    With one worker everything runs inline. The first exception raised by
    any task is re-raised after the pool shuts down.
    """
    items = list(items)
    workers = resolve_workers(workers)
    if workers == 1 or len(items) < 2:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as executor:
        futures: Dict[int, Future] = {i: executor.submit(func, item) for i, item in enumerate(items)}
        return [futures[i].result() for i in range(len(items))]
