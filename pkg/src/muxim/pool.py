"""Bounded process-pool helper for embarrassingly parallel task sets.

Shared read-only state (typically the multiplex plus a config) is shipped to
each worker once via the pool initializer; per-task payloads stay small.
Results come back in task order, so callers that key results by task index
are invariant to worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_SHARED: tuple | None = None


def _pool_init(payload: tuple) -> None:
    global _SHARED
    _SHARED = payload


def _pool_call(item):
    task_fn, shared = _SHARED
    return task_fn(shared, item)


def map_with_shared(
    task_fn: Callable[[object, T], R],
    shared: object,
    items: Sequence[T],
    workers: int = 1,
) -> list[R]:
    """Run task_fn(shared, item) for every item, optionally across processes.

    task_fn must be a module-level function (pickled by reference).  With
    workers <= 1 everything runs inline in this process.
    """
    if workers <= 1 or len(items) <= 1:
        return [task_fn(shared, item) for item in items]
    with ProcessPoolExecutor(
        max_workers=workers,
        initializer=_pool_init,
        initargs=((task_fn, shared),),
    ) as pool:
        return list(pool.map(_pool_call, items))
