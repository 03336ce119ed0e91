import asyncio
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")


class ChunkRunner:
    """Evaluate blocking per-chunk callables on worker threads with a bounded fan-out."""

    def __init__(self, max_workers: int = 4):
        if max_workers <= 0:
            raise ValueError("max_workers must be greater than zero")
        self._semaphore = asyncio.Semaphore(max_workers)

    async def run(self, func: Callable[[int], T], index: int) -> T:
        async with self._semaphore:
            return await asyncio.to_thread(func, index)

    async def map(self, func: Callable[[int], T], indices: Sequence[int]) -> List[T]:
        """Results keep the order of indices."""
        return list(await asyncio.gather(*(self.run(func, index) for index in indices)))


def run_chunks(func: Callable[[int], T], chunk_count: int, max_workers: int = 4) -> List[T]:
    """同期コードから chunk 0..chunk_count−1 をスレッドで並列評価（結果は chunk 順）

    各 chunk の乱数は呼び出し側が (seed, chunk) から決めるため、結果はスレッド数に依存しない。
    """
    if chunk_count <= 0:
        return []
    if max_workers <= 1 or chunk_count == 1:
        return [func(index) for index in range(chunk_count)]

    async def _gather() -> List[T]:
        return await ChunkRunner(max_workers=max_workers).map(func, range(chunk_count))

    return asyncio.run(_gather())
