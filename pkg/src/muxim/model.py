"""Core data model: layered directed graphs over a shared user-id space.

Users are plain non-negative integers, globally unique across layers; a user
appearing in several layers is the same id in each.  Cross-layer links are
therefore implicit (no interlayer edges are stored), and activation of a user
anywhere activates it everywhere.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import MultiplexError

IC = "ic"
LT = "lt"
MLT = "mlt"
FIXED_THRESHOLD = "fixed_threshold"

MODEL_KINDS = (IC, LT, MLT, FIXED_THRESHOLD)


@dataclass(frozen=True)
class DiffusionModelSpec:
    """Per-layer activation rule.

    kind:
      "ic"              independent cascade, edge weight = activation probability
      "lt"              linear threshold, node threshold ~ U(0,1] per simulation
      "mlt"             deterministic majority threshold (weights ignored)
      "fixed_threshold" deterministic, activates when active in-weight >= theta(u)

    thresholds / default_threshold apply to "fixed_threshold" only.
    """

    kind: str
    thresholds: dict[int, float] = field(default_factory=dict)
    default_threshold: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise MultiplexError(f"unknown diffusion model kind {self.kind!r}")
        for node, theta in self.thresholds.items():
            if theta < 0:
                raise MultiplexError(
                    f"fixed threshold for node {node} is {theta}, must be >= 0"
                )
        if self.default_threshold is not None and self.default_threshold < 0:
            raise MultiplexError("default_threshold must be >= 0")

    def threshold_of(self, node: int) -> float:
        theta = self.thresholds.get(node, self.default_threshold)
        if theta is None:
            raise MultiplexError(
                f"fixed_threshold layer has no threshold for node {node} "
                "and no default_threshold"
            )
        return theta


@dataclass(frozen=True)
class Layer:
    """One directed layer: adjacency plus its diffusion model.

    `out` / `inc` map a node to a tuple of (neighbor, weight) pairs.  `nodes`
    may include isolated nodes (allowed after manifest loading); overlap
    bookkeeping only counts `non_isolated` membership.
    """

    index: int
    model: DiffusionModelSpec
    out: dict[int, tuple[tuple[int, float], ...]]
    inc: dict[int, tuple[tuple[int, float], ...]]
    nodes: frozenset[int]
    non_isolated: frozenset[int]
    edge_count: int

    def edges(self) -> Iterator[tuple[int, int, float]]:
        for u, nbrs in sorted(self.out.items()):
            for v, w in nbrs:
                yield u, v, w

    def in_degree(self, node: int) -> int:
        return len(self.inc.get(node, ()))


def make_layer(
    index: int,
    edges: Iterable[tuple[int, int, float]],
    model: DiffusionModelSpec,
    extra_nodes: Iterable[int] = (),
) -> Layer:
    """Validate and build a layer from an edge list.

    Rejects self-loops, duplicate directed edges, and weights outside [0, 1],
    naming the offending element.  For LT layers, nodes whose incoming weights
    sum above 1 get those weights rescaled to sum exactly 1 (the threshold
    semantics require it).
    """
    if index < 0:
        raise MultiplexError(f"layer index must be >= 0, got {index}")
    out: dict[int, list[tuple[int, float]]] = {}
    inc: dict[int, list[tuple[int, float]]] = {}
    seen: set[tuple[int, int]] = set()
    nodes: set[int] = set()
    count = 0
    for u, v, w in edges:
        if u < 0 or v < 0:
            raise MultiplexError(f"layer {index}: negative user id on edge ({u}, {v})")
        if u == v:
            raise MultiplexError(f"layer {index}: self-loop on node {u}")
        if (u, v) in seen:
            raise MultiplexError(f"layer {index}: duplicate edge ({u}, {v})")
        if not 0.0 <= w <= 1.0:
            raise MultiplexError(
                f"layer {index}: edge ({u}, {v}) weight {w} outside [0, 1]"
            )
        seen.add((u, v))
        out.setdefault(u, []).append((v, w))
        inc.setdefault(v, []).append((u, w))
        nodes.add(u)
        nodes.add(v)
        count += 1

    if model.kind == LT:
        for v, nbrs in inc.items():
            total = sum(w for _, w in nbrs)
            if total > 1.0:
                inc[v] = [(u, w / total) for u, w in nbrs]
        # rebuild out-adjacency from the rescaled in-adjacency
        rescaled = {(u, v): w for v, nbrs in inc.items() for u, w in nbrs}
        for u, nbrs in out.items():
            out[u] = [(v, rescaled[(u, v)]) for v, _ in nbrs]

    for n in extra_nodes:
        if n < 0:
            raise MultiplexError(f"layer {index}: negative user id {n}")
        nodes.add(n)

    non_isolated = frozenset(out) | frozenset(inc)
    # adjacency sorted by neighbor id so iteration order is independent of
    # the order edges arrived in
    return Layer(
        index=index,
        model=model,
        out={u: tuple(sorted(nbrs)) for u, nbrs in out.items()},
        inc={v: tuple(sorted(nbrs)) for v, nbrs in inc.items()},
        nodes=frozenset(nodes),
        non_isolated=non_isolated,
        edge_count=count,
    )


@dataclass(frozen=True)
class Multiplex:
    """A list of layers over one user universe; immutable after build.

    `overlap` is exactly the set of users non-isolated in at least two
    layers.  Safe for concurrent read from any number of workers.
    """

    layers: tuple[Layer, ...]
    universe: frozenset[int]
    overlap: frozenset[int]

    @property
    def k(self) -> int:
        return len(self.layers)


def _compute_overlap(layers: Sequence[Layer]) -> frozenset[int]:
    seen_once: set[int] = set()
    seen_twice: set[int] = set()
    for layer in layers:
        for u in layer.non_isolated:
            if u in seen_once:
                seen_twice.add(u)
            else:
                seen_once.add(u)
    return frozenset(seen_twice)


def build_multiplex(layers: Sequence[Layer]) -> Multiplex:
    """Assemble validated layers into a multiplex.

    Layers may arrive in any order but their indices must be exactly
    0..k-1 with no duplicates.
    """
    if not layers:
        raise MultiplexError("a multiplex needs at least one layer")
    indices = sorted(layer.index for layer in layers)
    if indices != list(range(len(layers))):
        dupes = {i for i in indices if indices.count(i) > 1}
        if dupes:
            raise MultiplexError(f"duplicate layer index {sorted(dupes)[0]}")
        raise MultiplexError(
            f"layer indices must be 0..{len(layers) - 1}, got {indices}"
        )
    ordered = tuple(sorted(layers, key=lambda l: l.index))
    universe = frozenset().union(*(layer.nodes for layer in ordered))
    return Multiplex(
        layers=ordered,
        universe=universe,
        overlap=_compute_overlap(ordered),
    )


def overlap_count(m: Multiplex) -> int:
    """Number of overlapping users (non-isolated in >= 2 layers)."""
    return len(m.overlap)


def restrict_to_layer(m: Multiplex, i: int) -> Layer:
    """Layer i with its model, independent of the rest of the multiplex."""
    if not 0 <= i < m.k:
        raise IndexError(f"layer index {i} out of range for k={m.k}")
    return m.layers[i]


def single_layer_multiplex(layer: Layer) -> Multiplex:
    """Wrap one layer as a standalone multiplex (its index is reset to 0)."""
    return build_multiplex([dataclasses.replace(layer, index=0)])


@dataclass(frozen=True)
class SeedSet:
    """A chosen seed set together with the budget it was chosen under."""

    members: frozenset[int]
    budget: int

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise MultiplexError("seed budget must be >= 0")
        if len(self.members) > self.budget:
            raise MultiplexError(
                f"seed set of size {len(self.members)} exceeds budget {self.budget}"
            )
