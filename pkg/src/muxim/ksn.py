"""Knapsack-combined per-layer seeding.

Runs a single-layer seeder for every (layer, budget<=l) pair -- an
independent task set executed by a bounded worker pool -- assembles the
(cost, profit) table, and picks one budget per layer with a multiple-choice
knapsack solver.  The returned seed set is the union of the picked per-layer
sets (shared users deduplicate; freed slots are not back-filled).
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, replace

from .diffusion import PropagationConfig, SpreadEstimate, sigma_exact, sigma_mc
from .errors import UnsupportedModelError
from .mckp import MckpInstance, MckpItem, mckp_exact_dp, mckp_greedy_half
from .model import Multiplex, SeedSet
from .pool import map_with_shared
from .rng import derive_seed

_SEEDER_STREAM = 6
_PROFIT_STREAM = 7

PROFIT_MODES = ("multiplex", "per_layer")
SOLVERS = ("exact_dp", "greedy_half")


@dataclass(frozen=True)
class TableEntry:
    seeds: frozenset[int]
    cost: int
    profit: float
    layer_estimate: SpreadEstimate


@dataclass(frozen=True)
class SeedingTable:
    """entries[i][j]: seeder result for layer i at budget j, j in 0..l."""

    entries: tuple[tuple[TableEntry, ...], ...]
    budget: int

    def profits(self) -> list[list[float]]:
        return [[e.profit for e in row] for row in self.entries]


@dataclass(frozen=True)
class KsnReport:
    budget_split: tuple[int, ...]
    profits: tuple[tuple[float, ...], ...]
    wall_table_s: float
    wall_solve_s: float
    cpu_total_s: float
    workers: int


def _cpu_clock() -> float:
    t = os.times()
    return t.user + t.system + t.children_user + t.children_system


def _table_task(shared: tuple, task: tuple[int, int]) -> tuple[int, int, TableEntry]:
    m, seeder, profit_mode, estimator, cfg = shared
    i, j = task
    layer = m.layers[i]
    task_cfg = replace(cfg, rng_seed=derive_seed(cfg.rng_seed, _SEEDER_STREAM, i, j))
    try:
        seeds, layer_est = seeder.seed(layer, j, task_cfg)
    except UnsupportedModelError as exc:
        raise UnsupportedModelError(
            f"layer {i}, budget {j}: {exc}"
        ) from None
    if profit_mode == "per_layer":
        profit = layer_est.mean
    elif estimator == "exact":
        profit = sigma_exact(m, seeds)
    else:
        profit_cfg = replace(
            cfg, rng_seed=derive_seed(cfg.rng_seed, _PROFIT_STREAM, i, j)
        )
        profit = sigma_mc(m, seeds, profit_cfg).mean
    entry = TableEntry(
        seeds=seeds, cost=len(seeds), profit=max(0.0, profit), layer_estimate=layer_est
    )
    return i, j, entry


def build_table(
    m: Multiplex,
    budget: int,
    seeder,
    cfg: PropagationConfig,
    profit_mode: str = "multiplex",
    estimator: str = "mc",
    workers: int = 1,
) -> SeedingTable:
    """Seeder outputs and profits for every (layer, j) with 0 <= j <= budget.

    profit_mode "multiplex" evaluates each seed set on the whole multiplex;
    "per_layer" reuses the seeder's own layer-confined estimate.  The k*l
    tasks run independently (deterministic per-task streams), so the table is
    identical for any worker count.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if profit_mode not in PROFIT_MODES:
        raise ValueError(f"unknown profit_mode {profit_mode!r}")
    tasks = [(i, j) for i in range(m.k) for j in range(1, budget + 1)]
    shared = (m, seeder, profit_mode, estimator, cfg)
    results = map_with_shared(_table_task, shared, tasks, workers)
    zero = TableEntry(
        seeds=frozenset(), cost=0, profit=0.0,
        layer_estimate=SpreadEstimate(0.0, 0.0, 0),
    )
    rows: list[list[TableEntry]] = [
        [zero] * (budget + 1) for _ in range(m.k)
    ]
    for i, j, entry in results:
        rows[i][j] = entry
    return SeedingTable(
        entries=tuple(tuple(row) for row in rows), budget=budget
    )


def ksn_select(
    m: Multiplex,
    budget: int,
    seeder,
    cfg: PropagationConfig,
    solver: str = "greedy_half",
    profit_mode: str = "multiplex",
    estimator: str = "mc",
    workers: int = 1,
) -> tuple[SeedSet, KsnReport]:
    """Full knapsack seeding: table build, MCKP solve, union of picks."""
    if solver not in SOLVERS:
        raise ValueError(f"unknown solver {solver!r}")
    cpu0 = _cpu_clock()
    t0 = time.perf_counter()
    table = build_table(
        m, budget, seeder, cfg,
        profit_mode=profit_mode, estimator=estimator, workers=workers,
    )
    t1 = time.perf_counter()

    inst = MckpInstance(
        classes=tuple(
            tuple(
                MckpItem(cost=e.cost, profit=e.profit, payload=e.seeds)
                for e in row
            )
            for row in table.entries
        ),
        budget=budget,
    )
    solve = mckp_exact_dp if solver == "exact_dp" else mckp_greedy_half
    solution = solve(inst)
    t2 = time.perf_counter()

    union: set[int] = set()
    split = []
    for i, pick in enumerate(solution.picks):
        entry = table.entries[i][pick]
        union |= entry.seeds
        split.append(entry.cost)
    report = KsnReport(
        budget_split=tuple(split),
        profits=tuple(tuple(e.profit for e in row) for row in table.entries),
        wall_table_s=t1 - t0,
        wall_solve_s=t2 - t1,
        cpu_total_s=_cpu_clock() - cpu0,
        workers=workers,
    )
    return SeedSet(members=frozenset(union), budget=budget), report
