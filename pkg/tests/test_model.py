import random

import pytest

from muxim import (
    IC,
    LT,
    DiffusionModelSpec,
    MultiplexError,
    SeedSet,
    build_multiplex,
    make_layer,
    overlap_count,
    restrict_to_layer,
)

from conftest import make_toy_multiplex


def _ic(index, edges, extra=()):
    return make_layer(index, edges, DiffusionModelSpec(kind=IC), extra_nodes=extra)


def test_toy_overlap_is_a_and_b():
    m = make_toy_multiplex()
    assert sorted(m.overlap) == [0, 1]
    assert overlap_count(m) == 2
    assert sorted(m.universe) == [0, 1, 2]


def test_single_layer_has_no_overlap():
    m = build_multiplex([_ic(0, [(0, 1, 0.5), (1, 2, 0.3)])])
    assert overlap_count(m) == 0


def test_disjoint_layers_have_no_overlap():
    layers = [
        _ic(i, [(10 * i + a, 10 * i + a + 1, 0.5) for a in range(4)])
        for i in range(3)
    ]
    m = build_multiplex(layers)
    assert overlap_count(m) == 0
    assert len(m.universe) == 15


def test_universe_is_union_of_layer_nodes():
    rng = random.Random(5)
    for _ in range(20):
        layers = []
        for i in range(rng.randint(1, 3)):
            edges = set()
            while len(edges) < rng.randint(1, 6):
                u, v = rng.randrange(8), rng.randrange(8)
                if u != v:
                    edges.add((u, v))
            layers.append(_ic(i, [(u, v, 0.5) for u, v in edges]))
        m = build_multiplex(layers)
        assert m.universe == frozenset().union(*(l.nodes for l in m.layers))


def test_overlap_invariant_under_layer_order():
    rng = random.Random(9)
    base = [
        _ic(0, [(0, 1, 0.5), (2, 3, 0.5)]),
        _ic(1, [(1, 2, 0.5)]),
        _ic(2, [(3, 4, 0.5), (0, 4, 0.5)]),
    ]
    m = build_multiplex(base)
    for _ in range(5):
        shuffled = base[:]
        rng.shuffle(shuffled)
        # reindex to keep 0..k-1 while permuting content
        relabeled = [
            make_layer(i, list(l.edges()), l.model) for i, l in enumerate(shuffled)
        ]
        assert build_multiplex(relabeled).overlap == m.overlap


def test_isolated_node_does_not_join_overlap():
    # user 7 is isolated in layer 1, non-isolated only in layer 0
    l0 = _ic(0, [(7, 1, 0.5)])
    l1 = _ic(1, [(1, 2, 0.5)], extra=[7])
    m = build_multiplex([l0, l1])
    assert 7 not in m.overlap
    assert 1 in m.overlap
    # padding any layer with isolated nodes never changes the overlap
    l1_padded = _ic(1, [(1, 2, 0.5)], extra=[7, 99])
    assert build_multiplex([l0, l1_padded]).overlap == m.overlap


@pytest.mark.parametrize(
    "edges,message",
    [
        ([(3, 3, 0.5)], "self-loop on node 3"),
        ([(0, 1, 1.5)], "weight 1.5"),
        ([(0, 1, -0.1)], "weight -0.1"),
        ([(0, 1, 0.5), (0, 1, 0.7)], "duplicate edge (0, 1)"),
        ([(-1, 2, 0.5)], "negative user id"),
    ],
)
def test_layer_validation_names_offender(edges, message):
    with pytest.raises(MultiplexError) as err:
        make_layer(0, edges, DiffusionModelSpec(kind=IC))
    assert message in str(err.value)


def test_duplicate_layer_index_rejected():
    layers = [_ic(0, [(0, 1, 0.5)]), _ic(0, [(1, 2, 0.5)])]
    with pytest.raises(MultiplexError, match="duplicate layer index 0"):
        build_multiplex(layers)


def test_empty_multiplex_rejected():
    with pytest.raises(MultiplexError):
        build_multiplex([])


def test_restrict_to_layer():
    m = make_toy_multiplex()
    layer = restrict_to_layer(m, 0)
    assert sorted(layer.edges()) == [(0, 2, 0.5), (1, 2, 0.5)]
    assert restrict_to_layer(m, 1).edge_count == 1
    with pytest.raises(IndexError):
        restrict_to_layer(m, 2)
    with pytest.raises(IndexError):
        restrict_to_layer(m, -1)


def test_lt_in_weights_rescaled_to_one():
    layer = make_layer(
        0,
        [(0, 2, 0.9), (1, 2, 0.9), (0, 1, 0.4)],
        DiffusionModelSpec(kind=LT),
    )
    weights = {(u, v): w for u, v, w in layer.edges()}
    assert weights[(0, 2)] == pytest.approx(0.5)
    assert weights[(1, 2)] == pytest.approx(0.5)
    # node 1's incoming sum was already <= 1 and is untouched
    assert weights[(0, 1)] == pytest.approx(0.4)


def test_seed_set_budget_enforced():
    SeedSet(members=frozenset({1, 2}), budget=2)
    with pytest.raises(MultiplexError):
        SeedSet(members=frozenset({1, 2, 3}), budget=2)
    with pytest.raises(MultiplexError):
        SeedSet(members=frozenset(), budget=-1)
