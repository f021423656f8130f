"""Synthetic multiplex generation.

Layers are first generated as undirected skeletons over local ids
(preferential attachment or Erdos-Renyi), then wired together by merging one
randomly chosen slot per layer into each overlapping user, and finally given
diffusion models and edge weights.  Every undirected skeleton edge becomes
two directed edges.

All functions are deterministic given their rng / seed arguments.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .errors import MultiplexError
from .model import (
    FIXED_THRESHOLD,
    IC,
    DiffusionModelSpec,
    Multiplex,
    build_multiplex,
    make_layer,
)

WeightDist = tuple  # ("uniform", low, high) | ("constant", value)

UNIFORM01: WeightDist = ("uniform", 0.0, 1.0)
UNIFORM_SMALL: WeightDist = ("uniform", 0.0, 0.1)


@dataclass(frozen=True)
class LayerSkeleton:
    """Undirected edge list over local node ids 0..n-1."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def non_isolated(self) -> set[int]:
        s: set[int] = set()
        for u, v in self.edges:
            s.add(u)
            s.add(v)
        return s


def _random_subset(pool: list[int], size: int, rng: random.Random) -> set[int]:
    chosen: set[int] = set()
    while len(chosen) < size:
        chosen.add(pool[rng.randrange(len(pool))])
    return chosen


def gen_ba_layer(n: int, m_edges_per_node: int, rng: random.Random) -> LayerSkeleton:
    """Preferential-attachment skeleton: each new node attaches m edges.

    Produces m*(n-m) edges; the degree distribution has the usual heavy
    power-law tail (much heavier than an equal-density Erdos-Renyi graph).
    """
    m = m_edges_per_node
    if not 1 <= m < n:
        raise MultiplexError(f"need 1 <= m < n, got m={m}, n={n}")
    edges: list[tuple[int, int]] = []
    repeated: list[int] = []
    targets = list(range(m))
    for source in range(m, n):
        for t in targets:
            edges.append((source, t))
        repeated.extend(targets)
        repeated.extend([source] * m)
        targets = sorted(_random_subset(repeated, m, rng))
    return LayerSkeleton(n=n, edges=tuple(edges))


def gen_er_layer(n: int, avg_degree: float, rng: random.Random) -> LayerSkeleton:
    """G(n, p) skeleton with p = avg_degree / (n - 1), clamped to [0, 1].

    Uses geometric gap sampling, so the cost is proportional to the number of
    edges rather than n^2.
    """
    if n < 2:
        raise MultiplexError(f"need n >= 2, got n={n}")
    p = avg_degree / (n - 1)
    if p <= 0:
        return LayerSkeleton(n=n, edges=())
    if p >= 1:
        return LayerSkeleton(
            n=n, edges=tuple((u, v) for v in range(1, n) for u in range(v))
        )
    edges: list[tuple[int, int]] = []
    lp = math.log(1.0 - p)
    v, w = 1, -1
    while v < n:
        r = 1.0 - rng.random()  # in (0, 1], keeps log finite
        w += 1 + int(math.log(r) / lp)
        while w >= v and v < n:
            w -= v
            v += 1
        if v < n:
            edges.append((w, v))
    return LayerSkeleton(n=n, edges=tuple(edges))


_PLACEHOLDER = DiffusionModelSpec(kind=IC)


def wire_overlap(
    skeletons: Sequence[LayerSkeleton],
    overlap: int,
    rng: random.Random,
    mode: str = "all_layers",
) -> Multiplex:
    """Merge `overlap` per-layer slots into shared users, renumber the rest.

    Each overlapping user occupies one non-isolated slot in every layer
    (mode "all_layers" is the only supported wiring), so the resulting
    multiplex has exactly `overlap` overlapping users.  Overlapping users get
    ids 0..overlap-1; the remaining slots get fresh ids layer by layer.  Edge
    structure inside each layer is preserved exactly; the layers carry a
    placeholder IC/weight-1 model until assign_models replaces it.
    """
    if mode != "all_layers":
        raise MultiplexError(f"unknown overlap mode {mode!r}")
    if not skeletons:
        raise MultiplexError("need at least one layer skeleton")
    slots: list[list[int]] = []
    for li, skel in enumerate(skeletons):
        eligible = sorted(skel.non_isolated())
        if overlap > len(eligible):
            raise MultiplexError(
                f"overlap {overlap} exceeds the {len(eligible)} non-isolated "
                f"nodes of layer {li}"
            )
        slots.append(rng.sample(eligible, overlap))

    next_id = overlap
    layers = []
    for li, skel in enumerate(skeletons):
        mapping: dict[int, int] = {
            local: t for t, local in enumerate(slots[li])
        }
        for local in range(skel.n):
            if local not in mapping:
                mapping[local] = next_id
                next_id += 1
        directed = []
        for u, v in skel.edges:
            gu, gv = mapping[u], mapping[v]
            directed.append((gu, gv, 1.0))
            directed.append((gv, gu, 1.0))
        extra = [mapping[x] for x in range(skel.n)]
        layers.append(
            make_layer(li, directed, _PLACEHOLDER, extra_nodes=extra)
        )
    return build_multiplex(layers)


def _draw(dist: WeightDist, rng: random.Random) -> float:
    kind = dist[0]
    if kind == "uniform":
        return dist[1] + (dist[2] - dist[1]) * rng.random()
    if kind == "constant":
        return dist[1]
    raise MultiplexError(f"unknown weight distribution {dist!r}")


def assign_models(
    m: Multiplex,
    kinds: Sequence[str],
    weight_dist: WeightDist,
    rng: random.Random,
) -> Multiplex:
    """Rebuild the multiplex with per-layer model kinds and drawn weights.

    Weights are drawn independently per directed edge in sorted edge order;
    fixed_threshold layers also get a threshold per node from the same
    distribution.  LT weight normalization happens in the rebuild.
    """
    if len(kinds) != m.k:
        raise MultiplexError(
            f"need one model kind per layer ({m.k}), got {len(kinds)}"
        )
    layers = []
    for li, layer in enumerate(m.layers):
        kind = kinds[li]
        thresholds: dict[int, float] = {}
        if kind == FIXED_THRESHOLD:
            thresholds = {v: _draw(weight_dist, rng) for v in sorted(layer.nodes)}
        spec = DiffusionModelSpec(kind=kind, thresholds=thresholds)
        edges = [
            (u, v, _draw(weight_dist, rng))
            for u, v, _old in sorted(layer.edges())
        ]
        layers.append(
            make_layer(li, edges, spec, extra_nodes=sorted(layer.nodes))
        )
    return build_multiplex(layers)


def generate_multiplex(
    layer_specs: Sequence[dict],
    overlap: int,
    models: Sequence[str],
    weight_dist: WeightDist,
    seed: int,
) -> Multiplex:
    """One-call generator used by the harness, service, and CLI.

    layer_specs entries: {"kind": "ba", "n": ..., "m": ...} or
    {"kind": "er", "n": ..., "avg_degree": ...}.
    """
    rng = random.Random(seed)
    skeletons = []
    for spec in layer_specs:
        kind = spec["kind"]
        if kind == "ba":
            skeletons.append(gen_ba_layer(spec["n"], spec["m"], rng))
        elif kind == "er":
            skeletons.append(gen_er_layer(spec["n"], spec["avg_degree"], rng))
        else:
            raise MultiplexError(f"unknown layer generator {kind!r}")
    wired = wire_overlap(skeletons, overlap, rng)
    return assign_models(wired, models, weight_dist, rng)
