import threading

import pytest

from src.utils.concurrency import ChunkRunner, run_chunks


def test_run_chunks_keeps_chunk_order():
    assert run_chunks(lambda index: index * index, 6, max_workers=3) == [0, 1, 4, 9, 16, 25]


def test_run_chunks_sequential_path_matches_threaded_path():
    assert run_chunks(lambda index: index + 1, 5, max_workers=1) == run_chunks(lambda index: index + 1, 5, max_workers=4)


def test_run_chunks_with_no_chunks():
    assert run_chunks(lambda index: index, 0) == []


def test_run_chunks_bounds_parallelism():
    lock = threading.Lock()
    active = [0]
    peak = [0]
    release = threading.Event()

    def _work(index: int) -> int:
        with lock:
            active[0] += 1
            peak[0] = max(peak[0], active[0])
        release.wait(0.05)
        with lock:
            active[0] -= 1
        return index

    assert run_chunks(_work, 8, max_workers=2) == list(range(8))
    assert peak[0] <= 2


def test_chunk_runner_rejects_zero_workers():
    with pytest.raises(ValueError):
        ChunkRunner(max_workers=0)
