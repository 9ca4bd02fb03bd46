"""Small shared helpers."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor


def ordered_parallel(fn, items, threads: int = 1) -> list:
    """Map fn over items, optionally on a worker pool, preserving input order.

    Workers must be pure; the ordered merge keeps results deterministic
    regardless of scheduling.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
