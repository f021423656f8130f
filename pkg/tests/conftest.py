"""Shared fixtures: the canonical 2-layer toy multiplex and tiny random families."""

from __future__ import annotations

import itertools
import random

import pytest

from muxim import (
    FIXED_THRESHOLD,
    IC,
    LT,
    DiffusionModelSpec,
    Multiplex,
    build_multiplex,
    make_layer,
)

A, B, C = 0, 1, 2


def make_toy_multiplex() -> Multiplex:
    """Two layers over users {a=0, b=1, c=2}.

    Layer 0: fixed-threshold, edges a->c and b->c with weight 0.5 each and
    theta_c = 1, so c fires only once both a and b are active.
    Layer 1: IC with the single edge a->b, weight 0.5.
    Seeding {a} therefore yields {a} or {a,b,c}, each with probability 1/2.
    """
    layer0 = make_layer(
        0,
        [(A, C, 0.5), (B, C, 0.5)],
        DiffusionModelSpec(kind=FIXED_THRESHOLD, default_threshold=1.0),
    )
    layer1 = make_layer(1, [(A, B, 0.5)], DiffusionModelSpec(kind=IC))
    return build_multiplex([layer0, layer1])


@pytest.fixture
def toy() -> Multiplex:
    return make_toy_multiplex()


def random_gds_multiplex(seed: int, max_worlds: int = 1024) -> Multiplex:
    """Random 2-3 layer multiplex, <= 6 users, IC/LT only, <= 10 dimensions.

    Tracks the exact-oracle world count while adding edges so enumeration
    stays cheap.  Every user is non-isolated in at least one layer.
    """
    rng = random.Random(seed)
    n = rng.randint(4, 6)
    k = rng.randint(2, 3)
    users = list(range(n))
    kinds = [rng.choice([IC, LT]) for _ in range(k)]
    membership: dict[int, set[int]] = {}
    for u in users:
        layers_of_u = {rng.randrange(k)}
        for li in range(k):
            if rng.random() < 0.45:
                layers_of_u.add(li)
        membership[u] = layers_of_u

    dim_cap = rng.randint(6, 10)
    dims = 0
    worlds = 1
    layer_edges: list[list[tuple[int, int, float]]] = [[] for _ in range(k)]
    lt_indegree: list[dict[int, int]] = [dict() for _ in range(k)]
    candidates = [
        (li, u, v)
        for li in range(k)
        for u in users
        for v in users
        if u != v and li in membership[u] and li in membership[v]
    ]
    rng.shuffle(candidates)
    for li, u, v in candidates:
        if kinds[li] == IC:
            new_dims, factor = 1, 2
        else:
            deg = lt_indegree[li].get(v, 0)
            new_dims = 1 if deg == 0 else 0
            factor = (deg + 2) / (deg + 1)
        if dims + new_dims > dim_cap or worlds * factor > max_worlds:
            continue
        w = rng.uniform(0.25, 0.95)
        layer_edges[li].append((u, v, w))
        if kinds[li] == LT:
            lt_indegree[li][v] = lt_indegree[li].get(v, 0) + 1
        dims += new_dims
        worlds *= factor

    layers = []
    for li in range(k):
        if not layer_edges[li]:
            # keep every layer non-trivial
            members = sorted(u for u in users if li in membership[u])
            if len(members) < 2:
                members = users[:2]
            layer_edges[li].append((members[0], members[1], rng.uniform(0.25, 0.95)))
        layers.append(make_layer(li, layer_edges[li], DiffusionModelSpec(kind=kinds[li])))
    return build_multiplex(layers)


def all_subsets(users: list[int]):
    for r in range(len(users) + 1):
        yield from itertools.combinations(users, r)
