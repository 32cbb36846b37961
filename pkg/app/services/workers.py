"""Bounded worker pool for grid checks and family counts.

Results always come back in input order, so reports do not depend on the
number of workers.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, TypeVar

from app.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def worker_count(requested: Optional[int] = None) -> int:
    """Resolve a worker count, falling back to PPRES_THREADS and capping at 64."""
    count = requested if requested is not None else settings.PPRES_THREADS
    return max(1, min(count, 64))


def run_parallel(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> list[R]:
    """Apply fn to every item, using up to `threads` workers.

    Args:
        fn: Pure function of one item
        items: Work items
        threads: Worker cap; None means PPRES_THREADS

    Returns:
        Results in the order of `items`
    """
    work = list(items)
    workers = min(worker_count(threads), len(work))
    if workers <= 1:
        return [fn(item) for item in work]
    logger.debug(f"Running {len(work)} work items on {workers} workers")
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="ppres") as pool:
        return list(pool.map(fn, work))
