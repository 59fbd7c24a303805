"""Ordered process-pool map used by the sweeps."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def resolve_jobs(jobs: int) -> int:
    if jobs < 0:
        raise ValueError("jobs must be >= 0")
    return jobs or (os.cpu_count() or 1)


def ordered_map(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
    """``[fn(x) for x in items]``, spread over ``jobs`` processes (0 = one per CPU).

    Results come back in input order, so output never depends on scheduling.
    A worker exception propagates unchanged.
    """
    items = list(items)
    n = resolve_jobs(jobs)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
