import random

import pytest

from muxim import (
    InfeasibleError,
    MckpItem,
    make_instance,
    mckp_brute_force,
    mckp_exact_dp,
    mckp_greedy_half,
)

# the worked 3-class example table: profit per class at costs 0..4
WORKED_TABLE = [
    [(0, 0.0), (1, 200.0), (2, 350.0), (3, 400.0), (4, 425.0)],
    [(0, 0.0), (1, 600.0), (2, 601.0), (3, 602.0), (4, 603.0)],
    [(0, 0.0), (1, 200.0), (2, 210.0), (3, 214.0), (4, 214.0)],
]


def _random_instance(rng, k_max=6, l_max=8, budget_max=12):
    k = rng.randint(1, k_max)
    budget = rng.randint(0, budget_max)
    classes = []
    for _ in range(k):
        items = [(0, round(rng.uniform(0, 50), 3))]
        for _ in range(rng.randint(1, l_max)):
            items.append((rng.randint(0, max(1, budget + 2)), round(rng.uniform(0, 100), 3)))
        classes.append(items)
    return make_instance(classes, budget)


def test_worked_table_optimum_is_1150():
    inst = make_instance(WORKED_TABLE, 4)
    brute = mckp_brute_force(inst)
    dp = mckp_exact_dp(inst)
    assert brute.total_profit == pytest.approx(1150.0)
    assert dp.total_profit == pytest.approx(brute.total_profit)
    assert dp.picks == (2, 1, 1)
    assert dp.total_cost == 4
    greedy = mckp_greedy_half(inst)
    assert greedy.total_profit >= 0.5 * dp.total_profit


def test_all_zero_profits():
    inst = make_instance([[(0, 0.0), (2, 0.0)], [(0, 0.0)]], 3)
    sol = mckp_exact_dp(inst)
    assert sol.total_profit == 0.0
    assert mckp_greedy_half(inst).total_profit == 0.0


def test_zero_budget_forces_zero_cost_picks():
    inst = make_instance([[(0, 1.0), (1, 99.0)], [(0, 2.0), (3, 99.0)]], 0)
    sol = mckp_exact_dp(inst)
    assert sol.total_cost == 0
    assert sol.total_profit == pytest.approx(3.0)


def test_budget_is_non_strict():
    inst = make_instance([[(0, 0.0), (2, 10.0)], [(0, 0.0), (2, 10.0)]], 4)
    assert mckp_exact_dp(inst).total_profit == pytest.approx(20.0)


def test_dp_lexicographic_tie_break():
    # both (0-cost, 5) picks and symmetric alternatives reach the optimum;
    # the smallest pick vector must come back
    inst = make_instance([[(0, 0.0), (1, 5.0)], [(0, 0.0), (1, 5.0)]], 1)
    # optimum 5.0 reachable via picks (1,0) or (0,1); (0,1) is smaller
    assert mckp_exact_dp(inst).picks == (0, 1)


def test_dp_matches_brute_force_on_random_instances():
    rng = random.Random(7)
    for _ in range(80):
        inst = _random_instance(rng, k_max=4, l_max=5)
        dp = mckp_exact_dp(inst)
        brute = mckp_brute_force(inst)
        assert dp.total_profit == pytest.approx(brute.total_profit)
        assert dp.total_cost <= inst.budget


def test_greedy_half_bound_on_200_random_instances():
    rng = random.Random(123)
    for _ in range(200):
        inst = _random_instance(rng)
        dp = mckp_exact_dp(inst)
        greedy = mckp_greedy_half(inst)
        assert greedy.total_cost <= inst.budget
        assert greedy.total_profit >= 0.5 * dp.total_profit - 1e-9, inst


def test_single_class_greedy_is_exact():
    rng = random.Random(5)
    for _ in range(40):
        inst = _random_instance(rng, k_max=1)
        assert mckp_greedy_half(inst).total_profit == pytest.approx(
            mckp_exact_dp(inst).total_profit
        )


def test_removing_dominated_items_keeps_dp_optimum():
    rng = random.Random(11)
    for _ in range(40):
        inst = _random_instance(rng, k_max=4, l_max=6)
        base = mckp_exact_dp(inst).total_profit
        slim_classes = []
        for cls in inst.classes:
            kept = [
                item
                for item in cls
                if not any(
                    other.cost <= item.cost and other.profit > item.profit
                    or (other.cost < item.cost and other.profit >= item.profit)
                    for other in cls
                )
            ]
            slim_classes.append(kept or [min(cls, key=lambda i: i.cost)])
        slim = make_instance(slim_classes, inst.budget)
        assert mckp_exact_dp(slim).total_profit == pytest.approx(base)


def test_greedy_requires_zero_cost_items():
    inst = make_instance([[(1, 5.0)]], 2)
    with pytest.raises(ValueError, match="zero-cost"):
        mckp_greedy_half(inst)


def test_dp_guard_refuses_huge_tables():
    inst = make_instance([[(0, 1.0)]] * 2, 600000)
    with pytest.raises(InfeasibleError, match="cells"):
        mckp_exact_dp(inst)


def test_item_validation():
    with pytest.raises(ValueError):
        MckpItem(cost=-1, profit=0.0)
    with pytest.raises(ValueError):
        MckpItem(cost=0, profit=-2.0)
    with pytest.raises(ValueError):
        make_instance([], 3)
