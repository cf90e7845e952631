"""Order-preserving parallel map whose output is independent of job count."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def parallel_map(fn, items: list, jobs: int = 1) -> list:
    """Apply fn to items, optionally across processes.

    All randomness must already be baked into the items (derived sub-seeds), so
    the result list is identical for any jobs value.
    """
    if jobs < 1:
        raise ValueError(f"jobs must be positive, got {jobs}")
    if jobs == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


__all__ = ["parallel_map"]
