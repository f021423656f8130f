"""FastAPI service wrapping the core package.

A multiplex can be registered once (POST /multiplexes) and queried many
times, or passed inline with each estimate/select/experiment request.
Every numeric result is deterministic under the request's seed.
"""

from __future__ import annotations

import threading
import uuid

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import (
    EnumerationLimitError,
    InfeasibleError,
    ManifestError,
    MultiplexError,
    UnsupportedModelError,
)
from ..experiment import records_to_csv, run_cell
from ..manifest import load_multiplex
from ..mckp import make_instance, mckp_exact_dp, mckp_greedy_half
from ..model import Multiplex
from ..netgen import generate_multiplex
from ..diffusion import PropagationConfig, spread_report
from . import schemas as s

_CLIENT_ERRORS = (
    MultiplexError,
    ManifestError,
    UnsupportedModelError,
    EnumerationLimitError,
    InfeasibleError,
    ValueError,
)


class MultiplexStore:
    """In-memory registry of built multiplexes, keyed by opaque id."""

    def __init__(self) -> None:
        self._items: dict[str, Multiplex] = {}
        self._lock = threading.Lock()

    def put(self, m: Multiplex) -> str:
        mid = uuid.uuid4().hex[:12]
        with self._lock:
            self._items[mid] = m
        return mid

    def get(self, mid: str) -> Multiplex:
        with self._lock:
            m = self._items.get(mid)
        if m is None:
            raise HTTPException(status_code=404, detail=f"unknown multiplex {mid!r}")
        return m

    def drop(self, mid: str) -> None:
        with self._lock:
            if mid not in self._items:
                raise HTTPException(
                    status_code=404, detail=f"unknown multiplex {mid!r}"
                )
            del self._items[mid]


def _build(mx: s.MultiplexIn) -> Multiplex:
    if mx.layers is not None:
        return s.layers_to_multiplex(mx.layers)
    if mx.generate is not None:
        gen = mx.generate
        specs = []
        for layer in gen.layers:
            if layer.kind == "ba":
                specs.append({"kind": "ba", "n": layer.n, "m": layer.m})
            else:
                specs.append(
                    {"kind": "er", "n": layer.n, "avg_degree": layer.avg_degree}
                )
        return generate_multiplex(
            layer_specs=specs,
            overlap=gen.overlap,
            models=gen.models,
            weight_dist=gen.weight_dist.as_tuple(),
            seed=gen.seed,
        )
    return load_multiplex(mx.manifest_path)


def create_app() -> FastAPI:
    app = FastAPI(title="muxim", version=__version__)
    store = MultiplexStore()

    async def _domain_error(request: Request, exc: Exception):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    for exc_type in _CLIENT_ERRORS:
        app.add_exception_handler(exc_type, _domain_error)

    def _resolve(multiplex_id: str | None, inline: s.MultiplexIn | None) -> Multiplex:
        if (multiplex_id is None) == (inline is None):
            raise HTTPException(
                status_code=422,
                detail="provide exactly one of multiplex_id / multiplex",
            )
        if multiplex_id is not None:
            return store.get(multiplex_id)
        return _build(inline)

    @app.get("/health", response_model=s.HealthResponse)
    def health() -> s.HealthResponse:
        return s.HealthResponse(status="ok", version=__version__)

    @app.post("/multiplexes", response_model=s.MultiplexSummary)
    def create_multiplex(req: s.CreateMultiplexRequest) -> s.MultiplexSummary:
        m = _build(req.multiplex)
        mid = store.put(m)
        return s.summarize(m, multiplex_id=mid, include_layers=req.include_layers)

    @app.get("/multiplexes/{mid}", response_model=s.MultiplexSummary)
    def get_multiplex(mid: str, include_layers: bool = False) -> s.MultiplexSummary:
        m = store.get(mid)
        return s.summarize(m, multiplex_id=mid, include_layers=include_layers)

    @app.delete("/multiplexes/{mid}")
    def delete_multiplex(mid: str) -> dict:
        store.drop(mid)
        return {"deleted": mid}

    @app.post("/estimate", response_model=s.EstimateResponse)
    def estimate(req: s.EstimateRequest) -> s.EstimateResponse:
        m = _resolve(req.multiplex_id, req.multiplex)
        cfg = PropagationConfig(
            max_hops=req.config.max_hops,
            rng_seed=req.config.seed,
            samples=req.config.samples,
        )
        est, layer_means = spread_report(m, req.seeds, cfg)
        return s.EstimateResponse(
            sigma=s.EstimateOut(
                mean=est.mean, std_error=est.std_error, samples=est.samples
            ),
            per_layer_activation_means=layer_means,
        )

    @app.post("/select", response_model=s.SelectResponse)
    def select(req: s.SelectRequest) -> s.SelectResponse:
        m = _resolve(req.multiplex_id, req.multiplex)
        opts = req.options
        record = run_cell(
            m,
            req.algorithm,
            req.budget,
            master_seed=req.config.seed,
            alg_index=0,
            samples=req.config.samples,
            max_hops=req.config.max_hops,
            eval_samples=opts.eval_samples or req.config.samples,
            workers=req.workers,
            seeder_name=opts.seeder,
            estimator=opts.estimator,
            profit_mode=opts.profit_mode,
            solver=opts.solver,
            ris_samples=opts.ris_samples,
        )
        trace = None
        if "trace" in record.extra:
            trace = [s.TracePoint(**point) for point in record.extra["trace"]]
        return s.SelectResponse(
            algorithm=record.algorithm,
            budget=record.l,
            seeds=record.seeds,
            sigma=s.EstimateOut(
                mean=record.sigma_mean,
                std_error=record.sigma_stderr,
                samples=record.samples,
            ),
            per_layer_seed_counts=record.per_layer_seed_counts,
            per_layer_activation_means=record.per_layer_activation_means,
            overlap_seed_fraction=record.overlap_seed_fraction,
            trace=trace,
            budget_split=record.extra.get("budget_split"),
            wall_s=record.wall_s,
            cpu_s=record.cpu_s,
        )

    @app.post("/experiment", response_model=s.ExperimentResponse)
    def experiment(req: s.ExperimentRequest) -> s.ExperimentResponse:
        m = _build(req.multiplex)
        opts = req.options
        records = []
        for alg_index, algorithm in enumerate(req.algorithms):
            for budget in req.budgets:
                records.append(
                    run_cell(
                        m,
                        algorithm,
                        budget,
                        master_seed=req.config.seed,
                        alg_index=alg_index,
                        samples=req.config.samples,
                        max_hops=req.config.max_hops,
                        eval_samples=opts.eval_samples or req.config.samples,
                        workers=req.workers,
                        seeder_name=opts.seeder,
                        estimator=opts.estimator,
                        profit_mode=opts.profit_mode,
                        solver=opts.solver,
                        ris_samples=opts.ris_samples,
                    )
                )
        out = [
            s.ExperimentRecordOut(
                algorithm=r.algorithm,
                l=r.l,
                sigma_mean=r.sigma_mean,
                sigma_stderr=r.sigma_stderr,
                seeds=r.seeds,
                per_layer_seed_counts=r.per_layer_seed_counts,
                per_layer_activation_means=r.per_layer_activation_means,
                overlap_seed_fraction=r.overlap_seed_fraction,
                wall_s=r.wall_s,
                cpu_s=r.cpu_s,
            )
            for r in records
        ]
        return s.ExperimentResponse(records=out, csv=records_to_csv(records))

    @app.post("/mckp/solve", response_model=s.MckpSolveResponse)
    def mckp_solve(req: s.MckpSolveRequest) -> s.MckpSolveResponse:
        inst = make_instance(
            [[(item.cost, item.profit) for item in cls] for cls in req.classes],
            req.budget,
        )
        solver = mckp_exact_dp if req.solver == "exact_dp" else mckp_greedy_half
        sol = solver(inst)
        return s.MckpSolveResponse(
            picks=list(sol.picks),
            total_cost=sol.total_cost,
            total_profit=sol.total_profit,
        )

    return app


app = create_app()
