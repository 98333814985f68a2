"""Bounded concurrent batch runner for per-trace work."""

import asyncio
import logging
from collections.abc import Callable, Sequence
from typing import TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class BatchExecutor:
    """Run a pure function over items on a limited number of worker threads.

    Attributes:
        jobs: Maximum number of items processed at once
    """

    def __init__(self, jobs: int = 1) -> None:
        self.jobs = max(1, jobs)
        self.semaphore: asyncio.Semaphore | None = None

    async def _run_one(self, func: Callable[[T], R], item: T) -> R:
        """Run one item with concurrent worker limit.

        Args:
            func: Per-item function
            item: Item to process

        Returns:
            Function result
        """
        assert self.semaphore is not None
        async with self.semaphore:
            return await asyncio.to_thread(func, item)

    async def run(self, func: Callable[[T], R], items: Sequence[T]) -> list[R]:
        """Process every item concurrently.

        Returns:
            Results in input order
        """
        self.semaphore = asyncio.Semaphore(self.jobs)
        return list(await asyncio.gather(*[self._run_one(func, item) for item in items]))


def map_ordered(func: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    """Apply ``func`` to every item, in parallel when ``jobs`` > 1.

    The first exception raised by any item propagates. Results are ordered
    like ``items`` whatever the degree of parallelism.

    Args:
        func: Pure per-item function
        items: Items to process
        jobs: Maximum number of worker threads

    Returns:
        List of results in input order
    """
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug("Processing %d items on up to %d workers", len(items), jobs)
    return asyncio.run(BatchExecutor(jobs).run(func, items))
