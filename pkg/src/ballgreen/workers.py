"""Shared thread pool for grid fan-out."""

import threading
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

from ballgreen.config import get_settings

THREAD_PREFIX = "ballgreen-"


@lru_cache
def get_executor() -> ThreadPoolExecutor:
    """Process-wide pool sized by BALLGREEN_MAX_WORKERS."""
    settings = get_settings()
    return ThreadPoolExecutor(max_workers=settings.max_workers, thread_name_prefix=THREAD_PREFIX)


def parallel_map[T, R](fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Map fn over items on the shared pool; results keep the order of items.

    Calls made from inside a pool worker run serially so nested fan-out cannot deadlock.
    """
    items = list(items)
    if len(items) <= 1 or threading.current_thread().name.startswith(THREAD_PREFIX):
        return [fn(item) for item in items]
    return list(get_executor().map(fn, items))
