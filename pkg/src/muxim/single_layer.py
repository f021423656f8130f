"""Seed selection on a single homogeneous layer.

These are the plug-in algorithms the knapsack combiner and the baselines run
per layer: a lazy-greedy selector, a reverse-reachable-set sampler for IC/LT
layers, and an exhaustive selector for tiny test instances.  All maximize
spread confined to the layer.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, replace

from .diffusion import PropagationConfig, SpreadEstimate, sigma_exact, sigma_mc
from .errors import UnsupportedModelError
from .greedy import lazy_greedy_select
from .model import IC, LT, Layer, single_layer_multiplex
from .rng import derive_seed

_EVAL_STREAM = 4
_RR_STREAM = 5


def _exact_estimate(value: float) -> SpreadEstimate:
    return SpreadEstimate(mean=value, std_error=0.0, samples=0)


def seed_layer(
    layer: Layer,
    budget: int,
    cfg: PropagationConfig,
    estimator: str = "mc",
    workers: int = 1,
) -> tuple[frozenset[int], SpreadEstimate]:
    """Lazy-greedy selection of min(budget, |nodes|) seeds within one layer.

    Returns the seed set and its layer-confined spread estimate; budget 0
    yields (empty set, zero spread).
    """
    if budget <= 0 or not layer.nodes:
        return frozenset(), _exact_estimate(0.0)
    view = single_layer_multiplex(layer)

    if estimator == "exact":
        est = lambda seeds, _idx: sigma_exact(view, seeds)
    elif estimator == "mc":
        def est(seeds: frozenset[int], idx: int) -> float:
            call_cfg = replace(
                cfg, rng_seed=derive_seed(cfg.rng_seed, _EVAL_STREAM, idx)
            )
            return sigma_mc(view, seeds, call_cfg, workers=workers).mean
    else:
        raise ValueError(f"unknown estimator {estimator!r}")

    chosen, _trace = lazy_greedy_select(view.universe, budget, est)
    seeds = frozenset(chosen)
    if estimator == "exact":
        return seeds, _exact_estimate(sigma_exact(view, seeds))
    final_cfg = replace(cfg, rng_seed=derive_seed(cfg.rng_seed, _EVAL_STREAM + 1))
    return seeds, sigma_mc(view, seeds, final_cfg, workers=workers)


def brute_force_seed_layer(
    layer: Layer, budget: int, cfg: PropagationConfig
) -> tuple[frozenset[int], SpreadEstimate]:
    """Exhaustive optimum of exact layer spread over all subsets of the size.

    Only usable where the exact oracle is (small layers); ties go to the
    lexicographically smallest subset.
    """
    if budget <= 0 or not layer.nodes:
        return frozenset(), _exact_estimate(0.0)
    view = single_layer_multiplex(layer)
    size = min(budget, len(layer.nodes))
    best_set: tuple[int, ...] | None = None
    best_value = -1.0
    for combo in itertools.combinations(sorted(layer.nodes), size):
        value = sigma_exact(view, combo)
        if value > best_value + 1e-12:
            best_value = value
            best_set = combo
    return frozenset(best_set), _exact_estimate(best_value)


# --- Reverse-reachable-set sampling ------------------------------------------

def _reverse_reachable_set(
    layer: Layer, root: int, rng: random.Random, max_depth: int | None
) -> set[int]:
    """Sample the set of nodes that would reach `root` in a random world.

    IC: reverse BFS flipping each incoming edge's coin once.  LT: reverse
    walk choosing at most one triggering in-edge per node (probability =
    edge weight, none with the remaining mass).
    """
    kind = layer.model.kind
    reached = {root}
    if kind == IC:
        frontier = [root]
        depth = 0
        while frontier and (max_depth is None or depth < max_depth):
            nxt: list[int] = []
            for x in frontier:
                for u, w in layer.inc.get(x, ()):
                    if u not in reached and rng.random() < w:
                        reached.add(u)
                        nxt.append(u)
            frontier = nxt
            depth += 1
        return reached
    # LT: a single reverse chain
    x = root
    depth = 0
    while max_depth is None or depth < max_depth:
        incoming = layer.inc.get(x, ())
        if not incoming:
            break
        r = rng.random()
        acc = 0.0
        trigger = None
        for u, w in incoming:
            acc += w
            if r < acc:
                trigger = u
                break
        if trigger is None or trigger in reached:
            break
        reached.add(trigger)
        x = trigger
        depth += 1
    return reached


def ris_seed_layer(
    layer: Layer,
    budget: int,
    cfg: PropagationConfig,
) -> tuple[frozenset[int], SpreadEstimate]:
    """Reverse-influence-sampling seeder for IC or LT layers.

    Draws cfg.samples reverse-reachable sets from uniform random roots and
    greedily max-covers them with `budget` nodes; the spread estimate is
    |nodes| * covered fraction.  The sample budget is fixed up front (no
    adaptive stopping), so no w.h.p. approximation guarantee is claimed.
    """
    if layer.model.kind not in (IC, LT):
        raise UnsupportedModelError(
            f"RIS requires an IC or LT layer, got {layer.model.kind!r}"
        )
    if budget <= 0 or not layer.nodes:
        return frozenset(), _exact_estimate(0.0)
    nodes = sorted(layer.nodes)
    n = len(nodes)
    theta = cfg.samples
    rng = random.Random()
    rr_sets: list[set[int]] = []
    for s in range(theta):
        rng.seed(derive_seed(cfg.rng_seed, _RR_STREAM, s))
        root = nodes[rng.randrange(n)]
        rr_sets.append(_reverse_reachable_set(layer, root, rng, cfg.max_hops))

    member_of: dict[int, list[int]] = {}
    for idx, rr in enumerate(rr_sets):
        for u in rr:
            member_of.setdefault(u, []).append(idx)

    counts = {u: len(ids) for u, ids in member_of.items()}
    covered = [False] * len(rr_sets)
    picked: list[int] = []
    size = min(budget, n)
    for _ in range(size):
        best_u = None
        best_c = 0
        for u in sorted(counts):
            c = counts[u]
            if c > best_c:
                best_c = c
                best_u = u
        if best_u is None:
            break
        picked.append(best_u)
        del counts[best_u]
        for idx in member_of[best_u]:
            if not covered[idx]:
                covered[idx] = True
                for u in rr_sets[idx]:
                    if u in counts:
                        counts[u] -= 1
    if len(picked) < size:
        # coverage exhausted; pad with unused lowest-id nodes to honor the size
        for u in nodes:
            if u not in picked:
                picked.append(u)
                if len(picked) == size:
                    break

    fraction = sum(covered) / len(rr_sets)
    mean = n * fraction
    std_error = n * math.sqrt(max(0.0, fraction * (1.0 - fraction)) / len(rr_sets))
    return frozenset(picked), SpreadEstimate(
        mean=mean, std_error=std_error, samples=theta
    )


# --- Seeder objects (picklable, carry the nominal quality tag) ---------------

@dataclass(frozen=True)
class CelfSeeder:
    """Lazy-greedy per-layer seeder; alpha is its nominal single-layer ratio."""

    estimator: str = "mc"
    alpha: float = 1.0 - 1.0 / math.e
    kind: str = "greedy-celf"

    def seed(self, layer: Layer, budget: int, cfg: PropagationConfig):
        return seed_layer(layer, budget, cfg, estimator=self.estimator)


@dataclass(frozen=True)
class RisSeeder:
    """Reverse-reachable-set seeder (IC/LT only); rr_samples = sets per run."""

    rr_samples: int = 10000
    alpha: float = 1.0 - 1.0 / math.e
    kind: str = "ris"

    def seed(self, layer: Layer, budget: int, cfg: PropagationConfig):
        return ris_seed_layer(layer, budget, replace(cfg, samples=self.rr_samples))


@dataclass(frozen=True)
class BruteForceSeeder:
    """Exhaustive per-layer optimum; alpha = 1 on instances it can enumerate."""

    alpha: float = 1.0
    kind: str = "brute-force"

    def seed(self, layer: Layer, budget: int, cfg: PropagationConfig):
        return brute_force_seed_layer(layer, budget, cfg)


def make_seeder(name: str, estimator: str = "mc", rr_samples: int = 10000):
    """Seeder factory used by the CLI/service ('celf' | 'ris' | 'brute')."""
    if name == "celf":
        return CelfSeeder(estimator=estimator)
    if name == "ris":
        return RisSeeder(rr_samples=rr_samples)
    if name == "brute":
        return BruteForceSeeder()
    raise ValueError(f"unknown seeder {name!r}")
