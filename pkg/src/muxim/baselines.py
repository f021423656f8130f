"""Comparison seeders: even per-layer split and best-single-layer."""

from __future__ import annotations

from dataclasses import replace

from .diffusion import PropagationConfig
from .model import Multiplex, SeedSet
from .pool import map_with_shared
from .rng import derive_seed

_ES_STREAM = 8
_BSN_STREAM = 9


def even_split(total: int, parts: int) -> list[int]:
    """total split into `parts` budgets, remainder going to the lowest indices."""
    base, rem = divmod(total, parts)
    return [base + (1 if i < rem else 0) for i in range(parts)]


def _es_task(shared, task):
    m, seeder, cfg = shared
    i, j = task
    layer = m.layers[i]
    run_cfg = replace(cfg, rng_seed=derive_seed(cfg.rng_seed, _ES_STREAM, i))
    return seeder.seed(layer, min(j, len(layer.nodes)), run_cfg)


def even_seed(
    m: Multiplex,
    budget: int,
    seeder,
    cfg: PropagationConfig,
    workers: int = 1,
) -> SeedSet:
    """Seed every layer with an even share of the budget, union the results.

    With budget < k the first `budget` layers get one seed each.  Per-layer
    budgets are capped by layer size; duplicates across layers collapse.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    splits = even_split(budget, m.k)
    tasks = [(i, j) for i, j in enumerate(splits) if j > 0]
    results = map_with_shared(_es_task, (m, seeder, cfg), tasks, workers)
    union: set[int] = set()
    for seeds, _est in results:
        union |= seeds
    return SeedSet(members=frozenset(union), budget=budget)


def _bsn_task(shared, i):
    m, seeder, cfg, budget = shared
    layer = m.layers[i]
    run_cfg = replace(cfg, rng_seed=derive_seed(cfg.rng_seed, _BSN_STREAM, i))
    return seeder.seed(layer, min(budget, len(layer.nodes)), run_cfg)


def best_single_network(
    m: Multiplex,
    budget: int,
    seeder,
    cfg: PropagationConfig,
    workers: int = 1,
) -> SeedSet:
    """Put the whole budget in the layer whose own seeding spreads furthest.

    Runs the seeder with the full budget on every layer and keeps the seed
    set with the highest layer-confined spread estimate; ties go to the
    lowest layer index.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    results = map_with_shared(
        _bsn_task, (m, seeder, cfg, budget), list(range(m.k)), workers
    )
    best_i = 0
    best_mean = -1.0
    for i, (_seeds, est) in enumerate(results):
        if est.mean > best_mean:
            best_mean = est.mean
            best_i = i
    return SeedSet(members=frozenset(results[best_i][0]), budget=budget)
