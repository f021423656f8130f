"""Lazy (CELF-style) and plain greedy cores over an arbitrary spread estimator.

Both selectors work against an `estimate(seeds, eval_index)` callback; the
eval_index increments once per estimator call so Monte Carlo estimators can
derive an independent stream per evaluation.
"""

from __future__ import annotations

import heapq
from typing import Callable, Iterable

Estimator = Callable[[frozenset[int], int], float]


def lazy_greedy_select(
    candidates: Iterable[int],
    budget: int,
    estimate: Estimator,
) -> tuple[list[int], list[tuple[int, float]]]:
    """Greedy selection with staleness-checked lazy marginal gains.

    A popped queue entry is accepted only if its gain was computed at the
    current solution size; otherwise it is re-evaluated against the current
    solution and re-queued.  Ties break toward the lowest user id.  Negative
    estimated marginals (Monte Carlo noise) are clamped to zero.

    Returns the chosen users in pick order and a trace of
    (user, estimated spread after the pick).
    """
    users = sorted(set(candidates))
    take = min(budget, len(users))
    chosen: list[int] = []
    trace: list[tuple[int, float]] = []
    if take == 0:
        return chosen, trace

    evals = 0

    def ev(seeds: frozenset[int]) -> float:
        nonlocal evals
        value = estimate(seeds, evals)
        evals += 1
        return value

    # heap entries: (-gain, user, round) so equal gains pop the lowest id
    heap: list[tuple[float, int, int]] = []
    for v in users:
        gain = max(0.0, ev(frozenset((v,))))
        heap.append((-gain, v, 0))
    heapq.heapify(heap)

    current: set[int] = set()
    current_sigma = 0.0
    while len(chosen) < take and heap:
        neg_gain, v, computed_at = heapq.heappop(heap)
        if computed_at == len(chosen):
            chosen.append(v)
            current.add(v)
            # re-anchor to a fresh estimate rather than the running sum, so
            # Monte Carlo noise in old gains cannot accumulate
            current_sigma = ev(frozenset(current))
            trace.append((v, current_sigma))
        else:
            gain = max(0.0, ev(frozenset(current | {v})) - current_sigma)
            heapq.heappush(heap, (-gain, v, len(chosen)))
    return chosen, trace


def plain_greedy_select(
    candidates: Iterable[int],
    budget: int,
    estimate: Estimator,
) -> tuple[list[int], list[tuple[int, float]], bool]:
    """Reference greedy that re-evaluates every marginal each round.

    Returns (chosen, trace, tie_free) where tie_free is False if any round
    had two candidates within 1e-12 of the best gain; used by tests that
    compare against the lazy selector.
    """
    users = sorted(set(candidates))
    take = min(budget, len(users))
    chosen: list[int] = []
    trace: list[tuple[int, float]] = []
    tie_free = True
    evals = 0
    current: set[int] = set()
    current_sigma = 0.0
    for _ in range(take):
        best_user = None
        best_value = None
        second_value = None
        for v in users:
            if v in current:
                continue
            value = estimate(frozenset(current | {v}), evals)
            evals += 1
            if best_value is None or value > best_value:
                second_value = best_value
                best_value = value
                best_user = v
            elif second_value is None or value > second_value:
                second_value = value
        if second_value is not None and abs(best_value - second_value) <= 1e-12:
            tie_free = False
        chosen.append(best_user)
        current.add(best_user)
        current_sigma = best_value
        trace.append((best_user, current_sigma))
    return chosen, trace, tie_free
