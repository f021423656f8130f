"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..model import (
    DiffusionModelSpec,
    Multiplex,
    build_multiplex,
    make_layer,
)


class ModelSpecIn(BaseModel):
    kind: Literal["ic", "lt", "mlt", "fixed_threshold"]
    thresholds: dict[int, float] = Field(default_factory=dict)
    default_threshold: Optional[float] = None


class LayerIn(BaseModel):
    edges: list[tuple[int, int, float]]
    model: ModelSpecIn
    undirected: bool = False
    isolated: list[int] = Field(default_factory=list)


class WeightDistIn(BaseModel):
    kind: Literal["uniform", "constant"] = "uniform"
    low: float = 0.0
    high: float = 1.0
    value: float = 1.0

    def as_tuple(self) -> tuple:
        if self.kind == "uniform":
            return ("uniform", self.low, self.high)
        return ("constant", self.value)


class GenerateLayerIn(BaseModel):
    kind: Literal["ba", "er"]
    n: int
    m: int = 2
    avg_degree: float = 4.0


class GenerateIn(BaseModel):
    layers: list[GenerateLayerIn]
    models: list[str]
    overlap: int = 0
    weight_dist: WeightDistIn = Field(default_factory=WeightDistIn)
    seed: int = 0


class MultiplexIn(BaseModel):
    """Exactly one of: inline layers, generator spec, server-side manifest path."""

    layers: Optional[list[LayerIn]] = None
    generate: Optional[GenerateIn] = None
    manifest_path: Optional[str] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "MultiplexIn":
        given = [
            x for x in (self.layers, self.generate, self.manifest_path) if x is not None
        ]
        if len(given) != 1:
            raise ValueError("provide exactly one of layers / generate / manifest_path")
        return self


class ConfigIn(BaseModel):
    seed: int = 0
    samples: int = 1000
    max_hops: Optional[int] = None


class LayerOut(BaseModel):
    index: int
    model: ModelSpecIn
    edges: list[tuple[int, int, float]]
    isolated: list[int]


class MultiplexSummary(BaseModel):
    multiplex_id: Optional[str] = None
    k: int
    users: int
    overlap_users: int
    layer_edge_counts: list[int]
    layers: Optional[list[LayerOut]] = None


class CreateMultiplexRequest(BaseModel):
    multiplex: MultiplexIn
    include_layers: bool = False


class EstimateOut(BaseModel):
    mean: float
    std_error: float
    samples: int


class EstimateRequest(BaseModel):
    multiplex_id: Optional[str] = None
    multiplex: Optional[MultiplexIn] = None
    seeds: list[int]
    config: ConfigIn = Field(default_factory=ConfigIn)
    workers: int = 1


class EstimateResponse(BaseModel):
    sigma: EstimateOut
    per_layer_activation_means: list[float]


class SelectOptions(BaseModel):
    estimator: Literal["mc", "exact"] = "mc"
    seeder: Literal["celf", "ris", "brute"] = "celf"
    profit_mode: Literal["multiplex", "per_layer"] = "multiplex"
    solver: Literal["exact_dp", "greedy_half"] = "greedy_half"
    ris_samples: int = 10000
    eval_samples: Optional[int] = None


class SelectRequest(BaseModel):
    multiplex_id: Optional[str] = None
    multiplex: Optional[MultiplexIn] = None
    algorithm: Literal["isf", "ksn", "es", "bsn"]
    budget: int
    config: ConfigIn = Field(default_factory=ConfigIn)
    options: SelectOptions = Field(default_factory=SelectOptions)
    workers: int = 1


class TracePoint(BaseModel):
    user: int
    sigma: float


class SelectResponse(BaseModel):
    algorithm: str
    budget: int
    seeds: list[int]
    sigma: EstimateOut
    per_layer_seed_counts: list[int]
    per_layer_activation_means: list[float]
    overlap_seed_fraction: float
    trace: Optional[list[TracePoint]] = None
    budget_split: Optional[list[int]] = None
    wall_s: float
    cpu_s: float


class ExperimentRequest(BaseModel):
    multiplex: MultiplexIn
    algorithms: list[Literal["isf", "ksn", "es", "bsn"]]
    budgets: list[int]
    config: ConfigIn = Field(default_factory=ConfigIn)
    options: SelectOptions = Field(default_factory=SelectOptions)
    workers: int = 1


class ExperimentRecordOut(BaseModel):
    algorithm: str
    l: int
    sigma_mean: float
    sigma_stderr: float
    seeds: list[int]
    per_layer_seed_counts: list[int]
    per_layer_activation_means: list[float]
    overlap_seed_fraction: float
    wall_s: float
    cpu_s: float


class ExperimentResponse(BaseModel):
    records: list[ExperimentRecordOut]
    csv: str


class MckpItemIn(BaseModel):
    cost: int
    profit: float


class MckpSolveRequest(BaseModel):
    classes: list[list[MckpItemIn]]
    budget: int
    solver: Literal["exact_dp", "greedy_half"] = "exact_dp"


class MckpSolveResponse(BaseModel):
    picks: list[int]
    total_cost: int
    total_profit: float


class HealthResponse(BaseModel):
    status: str
    version: str


# --- converters between wire payloads and core objects -----------------------

def layers_to_multiplex(payload: list[LayerIn]) -> Multiplex:
    layers = []
    for index, spec in enumerate(payload):
        edges = list(spec.edges)
        if spec.undirected:
            edges = edges + [(v, u, w) for u, v, w in spec.edges]
        model = DiffusionModelSpec(
            kind=spec.model.kind,
            thresholds=dict(spec.model.thresholds),
            default_threshold=spec.model.default_threshold,
        )
        layers.append(make_layer(index, edges, model, extra_nodes=spec.isolated))
    return build_multiplex(layers)


def multiplex_to_layers(m: Multiplex) -> list[LayerOut]:
    out = []
    for layer in m.layers:
        out.append(
            LayerOut(
                index=layer.index,
                model=ModelSpecIn(
                    kind=layer.model.kind,
                    thresholds=dict(layer.model.thresholds),
                    default_threshold=layer.model.default_threshold,
                ),
                edges=list(layer.edges()),
                isolated=sorted(layer.nodes - layer.non_isolated),
            )
        )
    return out


def summarize(m: Multiplex, multiplex_id: str | None = None, include_layers: bool = False) -> MultiplexSummary:
    return MultiplexSummary(
        multiplex_id=multiplex_id,
        k=m.k,
        users=len(m.universe),
        overlap_users=len(m.overlap),
        layer_edge_counts=[layer.edge_count for layer in m.layers],
        layers=multiplex_to_layers(m) if include_layers else None,
    )
