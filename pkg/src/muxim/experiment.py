"""Experiment harness: sweep algorithms over seed budgets, emit CSV.

One row per (algorithm, budget) cell.  Everything except the timing columns
is deterministic under the configured master seed: each cell derives its own
streams from (seed, algorithm index, budget).
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from dataclasses import dataclass, field

from .baselines import best_single_network, even_seed
from .diffusion import PropagationConfig, spread_report
from .isf import isf_select
from .ksn import ksn_select
from .manifest import load_multiplex
from .model import Multiplex
from .netgen import generate_multiplex
from .rng import derive_seed
from .single_layer import make_seeder

ALGORITHMS = ("isf", "ksn", "es", "bsn")

CSV_COLUMNS = [
    "algorithm",
    "l",
    "sigma_mean",
    "sigma_stderr",
    "wall_s",
    "cpu_s",
    "seeds_json",
    "per_layer_seed_counts",
    "per_layer_activation_means",
]

_CELL_STREAM = 10
_EVAL_STREAM = 11


@dataclass
class RunRecord:
    """Everything measured for one (algorithm, budget) cell.

    Per-layer counts attribute overlapping users to every layer they belong
    to, so they can sum past the distinct-user sigma mean; both views are
    kept on purpose.
    """

    algorithm: str
    l: int
    sigma_mean: float
    sigma_stderr: float
    samples: int
    seeds: list[int]
    per_layer_seed_counts: list[int]
    per_layer_activation_means: list[float]
    overlap_seed_fraction: float
    wall_s: float
    cpu_s: float
    extra: dict = field(default_factory=dict)

    def csv_row(self) -> list[str]:
        return [
            self.algorithm,
            str(self.l),
            repr(self.sigma_mean),
            repr(self.sigma_stderr),
            repr(self.wall_s),
            repr(self.cpu_s),
            json.dumps(self.seeds),
            json.dumps(self.per_layer_seed_counts),
            json.dumps([repr(x) for x in self.per_layer_activation_means]),
        ]


def _cpu_clock() -> float:
    t = os.times()
    return t.user + t.system + t.children_user + t.children_system


def build_from_config(spec: dict) -> Multiplex:
    """Multiplex from a config's 'multiplex' entry: manifest or generator."""
    if "manifest" in spec:
        return load_multiplex(spec["manifest"])
    if "generate" in spec:
        gen = spec["generate"]
        dist = gen.get("weight_dist", {"kind": "uniform", "low": 0.0, "high": 1.0})
        if dist["kind"] == "uniform":
            wd = ("uniform", float(dist.get("low", 0.0)), float(dist.get("high", 1.0)))
        elif dist["kind"] == "constant":
            wd = ("constant", float(dist["value"]))
        else:
            raise ValueError(f"unknown weight_dist kind {dist['kind']!r}")
        return generate_multiplex(
            layer_specs=gen["layers"],
            overlap=int(gen.get("overlap", 0)),
            models=gen["models"],
            weight_dist=wd,
            seed=int(gen.get("seed", 0)),
        )
    raise ValueError("multiplex config needs 'manifest' or 'generate'")


def run_cell(
    m: Multiplex,
    algorithm: str,
    budget: int,
    master_seed: int,
    alg_index: int,
    samples: int,
    max_hops: int | None,
    eval_samples: int,
    workers: int = 1,
    seeder_name: str = "celf",
    estimator: str = "mc",
    profit_mode: str = "multiplex",
    solver: str = "greedy_half",
    ris_samples: int = 10000,
) -> RunRecord:
    """Select with one algorithm at one budget and evaluate the result."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    cell_seed = derive_seed(master_seed, _CELL_STREAM, alg_index, budget)
    cfg = PropagationConfig(max_hops=max_hops, rng_seed=cell_seed, samples=samples)
    seeder = make_seeder(seeder_name, estimator=estimator, rr_samples=ris_samples)

    wall0 = time.perf_counter()
    cpu0 = _cpu_clock()
    extra: dict = {}
    if algorithm == "isf":
        seed_set, trace = isf_select(m, budget, cfg, estimator=estimator, workers=workers)
        extra["trace"] = [{"user": u, "sigma": s} for u, s in trace]
    elif algorithm == "ksn":
        seed_set, report = ksn_select(
            m, budget, seeder, cfg,
            solver=solver, profit_mode=profit_mode,
            estimator=estimator, workers=workers,
        )
        extra["budget_split"] = list(report.budget_split)
        extra["wall_table_s"] = report.wall_table_s
        extra["wall_solve_s"] = report.wall_solve_s
        extra["cpu_total_s"] = report.cpu_total_s
    elif algorithm == "es":
        seed_set = even_seed(m, budget, seeder, cfg, workers=workers)
    else:
        seed_set = best_single_network(m, budget, seeder, cfg, workers=workers)

    eval_cfg = PropagationConfig(
        max_hops=max_hops,
        rng_seed=derive_seed(cell_seed, _EVAL_STREAM),
        samples=eval_samples,
    )
    estimate, layer_means = spread_report(m, seed_set.members, eval_cfg)
    wall = time.perf_counter() - wall0
    cpu = _cpu_clock() - cpu0

    seeds = sorted(seed_set.members)
    seed_counts = [
        sum(1 for u in seeds if u in layer.nodes) for layer in m.layers
    ]
    overlap_frac = (
        sum(1 for u in seeds if u in m.overlap) / len(seeds) if seeds else 0.0
    )
    return RunRecord(
        algorithm=algorithm,
        l=budget,
        sigma_mean=estimate.mean,
        sigma_stderr=estimate.std_error,
        samples=estimate.samples,
        seeds=seeds,
        per_layer_seed_counts=seed_counts,
        per_layer_activation_means=layer_means,
        overlap_seed_fraction=overlap_frac,
        wall_s=wall,
        cpu_s=cpu,
        extra=extra,
    )


def run_experiment(config: dict, output_path: str | None = None) -> list[RunRecord]:
    """Run every (algorithm, budget) cell of a config; optionally write CSV.

    Config keys: multiplex (manifest | generate), algorithms, budgets, seed,
    samples, max_hops, eval_samples, workers, seeder, estimator, profit_mode,
    solver, ris_samples.  Cells run sequentially; inner parallelism is bounded
    by `workers`.
    """
    m = build_from_config(config["multiplex"])
    algorithms = config.get("algorithms", ["isf"])
    budgets = config.get("budgets", [1])
    records = []
    for alg_index, algorithm in enumerate(algorithms):
        for budget in budgets:
            records.append(
                run_cell(
                    m,
                    algorithm,
                    int(budget),
                    master_seed=int(config.get("seed", 0)),
                    alg_index=alg_index,
                    samples=int(config.get("samples", 1000)),
                    max_hops=config.get("max_hops"),
                    eval_samples=int(
                        config.get("eval_samples", config.get("samples", 1000))
                    ),
                    workers=int(config.get("workers", 1)),
                    seeder_name=config.get("seeder", "celf"),
                    estimator=config.get("estimator", "mc"),
                    profit_mode=config.get("profit_mode", "multiplex"),
                    solver=config.get("solver", "greedy_half"),
                    ris_samples=int(config.get("ris_samples", 10000)),
                )
            )
    if output_path is not None:
        with open(output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(records_to_csv(records))
    return records


def records_to_csv(records: list[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow(record.csv_row())
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    """Read a harness CSV back into dicts with numeric fields restored."""
    rows = []
    reader = csv.DictReader(io.StringIO(text))
    for raw in reader:
        rows.append(
            {
                "algorithm": raw["algorithm"],
                "l": int(raw["l"]),
                "sigma_mean": float(raw["sigma_mean"]),
                "sigma_stderr": float(raw["sigma_stderr"]),
                "wall_s": float(raw["wall_s"]),
                "cpu_s": float(raw["cpu_s"]),
                "seeds": json.loads(raw["seeds_json"]),
                "per_layer_seed_counts": json.loads(raw["per_layer_seed_counts"]),
                "per_layer_activation_means": [
                    float(x) for x in json.loads(raw["per_layer_activation_means"])
                ],
            }
        )
    return rows
