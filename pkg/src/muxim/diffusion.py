"""Multiplex propagation: deterministic worlds, Monte Carlo, and exact spread.

Propagation alternates synchronous rounds: every layer advances one step from
the same globally-active set, then new activations are merged (a user active
anywhere is active everywhere).  One such fused round is one "hop", which is
what `max_hops` counts.

Stochastic models are handled two ways:
  * Monte Carlo (`sigma_mc`): coins and thresholds sampled per simulation.
  * Exact (`sigma_exact`): enumeration of deterministic world realizations
    (live/blocked flags for IC edges; per-node triggering in-edge for LT),
    each propagated deterministically and probability-weighted.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import EnumerationLimitError, MultiplexError
from .model import FIXED_THRESHOLD, IC, LT, MLT, Layer, Multiplex, single_layer_multiplex
from .pool import map_with_shared
from .rng import derive_seed

MAX_EXACT_DIMENSIONS = 20


@dataclass(frozen=True)
class PropagationConfig:
    """Knobs shared by all spread evaluations.

    max_hops caps the number of alternation rounds (None = run to fixpoint);
    rng_seed is the master seed all sample streams derive from; samples is
    the Monte Carlo run count.
    """

    max_hops: int | None = None
    rng_seed: int = 0
    samples: int = 1000

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.max_hops is not None and self.max_hops < 1:
            raise ValueError("max_hops must be >= 1 when set")


@dataclass(frozen=True)
class SpreadEstimate:
    mean: float
    std_error: float
    samples: int


@dataclass(frozen=True)
class WorldRealization:
    """One deterministic instantiation of every stochastic layer.

    layer_states[i] is a frozenset of live (u, v) edges for IC layers, a
    {node: triggering in-neighbor or None} map for LT layers, and None for
    layers that are already deterministic.
    """

    layer_states: tuple[object, ...]
    probability: float


def _check_seeds(m: Multiplex, seeds: Iterable[int]) -> frozenset[int]:
    s = frozenset(seeds)
    bad = s - m.universe
    if bad:
        raise MultiplexError(f"seed user {min(bad)} is not in the multiplex universe")
    return s


def _zero_threshold_nodes(layer: Layer) -> list[int]:
    # fixed_threshold nodes with theta <= 0 activate in round 1 unconditionally
    spec = layer.model
    if spec.kind != FIXED_THRESHOLD:
        return []
    if spec.default_threshold is not None and spec.default_threshold <= 0:
        return [v for v in layer.nodes if spec.threshold_of(v) <= 0]
    return [v for v, th in spec.thresholds.items() if th <= 0 and v in layer.nodes]


def _threshold_fires(layer: Layer, v: int, active: set[int] | frozenset[int]) -> bool:
    kind = layer.model.kind
    incoming = layer.inc.get(v, ())
    if kind == MLT:
        d = len(incoming)
        if d == 0:
            return False
        hits = sum(1 for u, _ in incoming if u in active)
        return hits >= (d + 1) // 2
    # fixed_threshold
    total = sum(w for u, w in incoming if u in active)
    return total >= layer.model.threshold_of(v)


def propagate_deterministic(
    m: Multiplex,
    world: WorldRealization,
    seeds: Iterable[int],
    max_hops: int | None = None,
) -> frozenset[int]:
    """Fixpoint of multiplex propagation under one deterministic world.

    Total on valid inputs; the result always contains the seeds.
    """
    active = set(_check_seeds(m, seeds))
    frontier = set(active)
    hops = 0
    while frontier and (max_hops is None or hops < max_hops):
        new: set[int] = set()
        for li, layer in enumerate(m.layers):
            kind = layer.model.kind
            state = world.layer_states[li]
            if kind == IC:
                live = state
                for u in frontier:
                    for v, _w in layer.out.get(u, ()):
                        if v not in active and v not in new and (u, v) in live:
                            new.add(v)
            elif kind == LT:
                triggers = state
                for u in frontier:
                    for v, _w in layer.out.get(u, ()):
                        if v not in active and v not in new and triggers.get(v) == u:
                            new.add(v)
            else:
                candidates: set[int] = set()
                for u in frontier:
                    for v, _w in layer.out.get(u, ()):
                        if v not in active and v not in new:
                            candidates.add(v)
                if hops == 0:
                    candidates.update(
                        v for v in _zero_threshold_nodes(layer) if v not in active
                    )
                for v in candidates:
                    if _threshold_fires(layer, v, active):
                        new.add(v)
        active |= new
        frontier = new
        hops += 1
    return frozenset(active)


def simulate_once(
    m: Multiplex,
    seeds: Iterable[int],
    rng: random.Random,
    max_hops: int | None = None,
) -> frozenset[int]:
    """One sampled cascade.

    IC edges get a single coin, flipped when the source first fires while the
    target is inactive; LT thresholds are drawn from U(0, 1] once per node per
    simulation (on first evaluation, fixed thereafter).  Iteration order over
    random draws is sorted so equal rng streams give identical cascades.
    """
    active = set(_check_seeds(m, seeds))
    frontier = set(active)
    lt_thresholds: list[dict[int, float] | None] = [
        {} if layer.model.kind == LT else None for layer in m.layers
    ]
    hops = 0
    while frontier and (max_hops is None or hops < max_hops):
        new: set[int] = set()
        ordered_frontier = sorted(frontier)
        for li, layer in enumerate(m.layers):
            kind = layer.model.kind
            if kind == IC:
                for u in ordered_frontier:
                    for v, w in layer.out.get(u, ()):
                        if v not in active and v not in new and rng.random() < w:
                            new.add(v)
            elif kind == LT:
                thetas = lt_thresholds[li]
                candidates: set[int] = set()
                for u in frontier:
                    for v, _w in layer.out.get(u, ()):
                        if v not in active and v not in new:
                            candidates.add(v)
                for v in sorted(candidates):
                    theta = thetas.get(v)
                    if theta is None:
                        theta = 1.0 - rng.random()
                        thetas[v] = theta
                    total = sum(w for u, w in layer.inc.get(v, ()) if u in active)
                    if total >= theta:
                        new.add(v)
            else:
                candidates = set()
                for u in frontier:
                    for v, _w in layer.out.get(u, ()):
                        if v not in active and v not in new:
                            candidates.add(v)
                if hops == 0:
                    candidates.update(
                        v for v in _zero_threshold_nodes(layer) if v not in active
                    )
                for v in candidates:
                    if _threshold_fires(layer, v, active):
                        new.add(v)
        active |= new
        frontier = new
        hops += 1
    return frozenset(active)


# --- Monte Carlo estimation -------------------------------------------------

def _mc_sums(
    m: Multiplex,
    seeds: frozenset[int],
    cfg: PropagationConfig,
    lo: int,
    hi: int,
) -> tuple[int, int]:
    """Sum and sum-of-squares of cascade sizes for sample indices [lo, hi)."""
    rng = random.Random()
    total = 0
    total_sq = 0
    for s in range(lo, hi):
        rng.seed(derive_seed(cfg.rng_seed, s))
        size = len(simulate_once(m, seeds, rng, cfg.max_hops))
        total += size
        total_sq += size * size
    return total, total_sq


def _mc_task(shared: tuple, span: tuple[int, int]) -> tuple[int, int]:
    m, seeds, cfg = shared
    return _mc_sums(m, seeds, cfg, span[0], span[1])


def _estimate_from_sums(total: int, total_sq: int, n: int) -> SpreadEstimate:
    mean = total / n
    if n > 1:
        var = max(0.0, (total_sq - n * mean * mean) / (n - 1))
        std_error = math.sqrt(var / n)
    else:
        std_error = 0.0
    return SpreadEstimate(mean=mean, std_error=std_error, samples=n)


def _sample_spans(samples: int, workers: int) -> list[tuple[int, int]]:
    chunks = min(samples, workers * 4)
    step = samples // chunks
    extra = samples % chunks
    spans = []
    lo = 0
    for c in range(chunks):
        hi = lo + step + (1 if c < extra else 0)
        spans.append((lo, hi))
        lo = hi
    return spans


def sigma_mc(
    m: Multiplex,
    seeds: Iterable[int],
    cfg: PropagationConfig,
    workers: int = 1,
) -> SpreadEstimate:
    """Monte Carlo estimate of the expected number of distinct activated users.

    Sample s always uses the stream derived from (cfg.rng_seed, s), and the
    reduction is over integer cascade sizes, so the estimate is bit-identical
    for any worker count.
    """
    seed_set = _check_seeds(m, seeds)
    n = cfg.samples
    if workers <= 1 or n < 2 * workers:
        total, total_sq = _mc_sums(m, seed_set, cfg, 0, n)
    else:
        parts = map_with_shared(
            _mc_task, (m, seed_set, cfg), _sample_spans(n, workers), workers
        )
        total = sum(p[0] for p in parts)
        total_sq = sum(p[1] for p in parts)
    return _estimate_from_sums(total, total_sq, n)


def spread_report(
    m: Multiplex,
    seeds: Iterable[int],
    cfg: PropagationConfig,
) -> tuple[SpreadEstimate, list[float]]:
    """Like sigma_mc, plus the mean activation count inside each layer.

    Per-layer counts attribute an activated overlapping user to every layer
    it belongs to, so they may sum to more than the distinct-user mean.
    """
    seed_set = _check_seeds(m, seeds)
    rng = random.Random()
    total = 0
    total_sq = 0
    layer_totals = [0] * m.k
    for s in range(cfg.samples):
        rng.seed(derive_seed(cfg.rng_seed, s))
        activated = simulate_once(m, seed_set, rng, cfg.max_hops)
        size = len(activated)
        total += size
        total_sq += size * size
        for li, layer in enumerate(m.layers):
            layer_totals[li] += len(activated & layer.nodes)
    estimate = _estimate_from_sums(total, total_sq, cfg.samples)
    return estimate, [t / cfg.samples for t in layer_totals]


# --- Exact enumeration oracle -----------------------------------------------

def exact_dimension_count(m: Multiplex) -> int:
    """Number of random dimensions the exact oracle would enumerate over."""
    dims = 0
    for layer in m.layers:
        if layer.model.kind == IC:
            dims += layer.edge_count
        elif layer.model.kind == LT:
            dims += sum(1 for v in layer.inc if layer.inc[v])
    return dims


def enumerate_realizations(m: Multiplex) -> Iterator[WorldRealization]:
    """All deterministic worlds of the multiplex with their probabilities.

    IC edges contribute a live/blocked branch each; LT nodes contribute one
    branch per incoming edge (probability = weight) plus a no-trigger branch
    (probability 1 - sum of weights).  Zero-probability branches are pruned,
    so the yielded probabilities sum to 1.
    """
    dims = exact_dimension_count(m)
    if dims > MAX_EXACT_DIMENSIONS:
        raise EnumerationLimitError(
            f"instance has {dims} random dimensions; exact enumeration is "
            f"limited to {MAX_EXACT_DIMENSIONS}"
        )

    choice_points: list[tuple[int, str, object]] = []
    for li, layer in enumerate(m.layers):
        kind = layer.model.kind
        if kind == IC:
            for u, nbrs in sorted(layer.out.items()):
                for v, w in nbrs:
                    choice_points.append((li, "ic", ((u, v), w)))
        elif kind == LT:
            for v, nbrs in sorted(layer.inc.items()):
                options: list[tuple[int | None, float]] = [
                    (u, w) for u, w in nbrs if w > 0.0
                ]
                none_p = max(0.0, 1.0 - sum(w for _, w in nbrs))
                if none_p > 0.0:
                    options.append((None, none_p))
                choice_points.append((li, "lt", (v, options)))

    states: list[object] = [
        set() if layer.model.kind == IC else ({} if layer.model.kind == LT else None)
        for layer in m.layers
    ]

    def rec(idx: int, prob: float) -> Iterator[WorldRealization]:
        if idx == len(choice_points):
            frozen = tuple(
                frozenset(s) if isinstance(s, set)
                else (dict(s) if isinstance(s, dict) else None)
                for s in states
            )
            yield WorldRealization(layer_states=frozen, probability=prob)
            return
        li, kind, payload = choice_points[idx]
        if kind == "ic":
            edge, w = payload
            if w > 0.0:
                states[li].add(edge)
                yield from rec(idx + 1, prob * w)
                states[li].discard(edge)
            if w < 1.0:
                yield from rec(idx + 1, prob * (1.0 - w))
        else:
            v, options = payload
            for trigger, p in options:
                states[li][v] = trigger
                yield from rec(idx + 1, prob * p)
            del states[li][v]

    yield from rec(0, 1.0)


def sigma_exact(m: Multiplex, seeds: Iterable[int]) -> float:
    """Exact expected spread by enumeration of world realizations.

    Refuses instances with more than MAX_EXACT_DIMENSIONS random dimensions.
    """
    seed_set = _check_seeds(m, seeds)
    total = 0.0
    for world in enumerate_realizations(m):
        total += world.probability * len(
            propagate_deterministic(m, world, seed_set)
        )
    return total


# --- Layer-confined spread ---------------------------------------------------

def _layer_view(m: Multiplex, i: int) -> tuple[Multiplex, Layer]:
    if not 0 <= i < m.k:
        raise IndexError(f"layer index {i} out of range for k={m.k}")
    layer = m.layers[i]
    return single_layer_multiplex(layer), layer


def sigma_layer(
    m: Multiplex,
    i: int,
    seeds: Iterable[int],
    cfg: PropagationConfig,
    workers: int = 1,
) -> SpreadEstimate:
    """Spread with propagation confined to layer i.

    Only users present in layer i count; seed users absent from the layer
    contribute nothing.
    """
    view, layer = _layer_view(m, i)
    return sigma_mc(view, frozenset(seeds) & layer.nodes, cfg, workers=workers)


def sigma_layer_exact(m: Multiplex, i: int, seeds: Iterable[int]) -> float:
    """Exact counterpart of sigma_layer (same enumeration limits as sigma_exact)."""
    view, layer = _layer_view(m, i)
    return sigma_exact(view, frozenset(seeds) & layer.nodes)
