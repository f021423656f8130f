"""Structural laws of deterministic propagation and the exact oracle.

Small, fast versions; the acceptance suite re-runs them at full size.
"""

import itertools

import pytest

from muxim import (
    WorldRealization,
    enumerate_realizations,
    propagate_deterministic,
    sigma_exact,
    single_layer_multiplex,
)

from conftest import random_gds_multiplex

INSTANCES = [random_gds_multiplex(seed) for seed in range(6)]


def _masks(users):
    for r in range(len(users) + 1):
        for combo in itertools.combinations(users, r):
            yield frozenset(combo)


@pytest.mark.parametrize("m", INSTANCES, ids=lambda m: f"n{len(m.universe)}k{m.k}")
def test_submodularity_and_monotonicity_of_exact_spread(m):
    users = sorted(m.universe)
    sigma = {s: sigma_exact(m, s) for s in _masks(users)}
    subsets = list(sigma)
    for sa in subsets:
        for sb in subsets:
            lhs = sigma[sa] + sigma[sb]
            rhs = sigma[sa | sb] + sigma[sa & sb]
            assert lhs >= rhs - 1e-9, (sorted(sa), sorted(sb))
            if sa <= sb:
                assert sigma[sa] <= sigma[sb] + 1e-9


@pytest.mark.parametrize("m", INSTANCES[:4], ids=lambda m: f"n{len(m.universe)}k{m.k}")
def test_fixpoint_and_union_laws_per_world(m):
    users = sorted(m.universe)
    layer_views = [single_layer_multiplex(layer) for layer in m.layers]
    seed_sets = [frozenset(s) for s in _masks(users)]
    for world in enumerate_realizations(m):
        tau = {s: propagate_deterministic(m, world, s) for s in seed_sets}
        for s in seed_sets:
            # re-running any single layer on tau(S) must add nothing
            for li, view in enumerate(layer_views):
                sub_world = WorldRealization(
                    layer_states=(world.layer_states[li],), probability=1.0
                )
                inside = tau[s] & view.universe
                closed = propagate_deterministic(view, sub_world, inside)
                assert closed | tau[s] == tau[s], (sorted(s), li)
        for sa in seed_sets:
            for sb in seed_sets:
                assert tau[frozenset(sa | sb)] == tau[sa] | tau[sb]
