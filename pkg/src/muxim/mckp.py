"""Multiple-choice knapsack: exact dynamic program and greedy 1/2-approximation.

One item must be picked from each class subject to a total integer cost
budget (non-strict).  Profits are arbitrary non-negative reals; the DP only
indexes on cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .errors import InfeasibleError

DP_CELL_GUARD = 1_000_000


@dataclass(frozen=True)
class MckpItem:
    cost: int
    profit: float
    payload: Any = None

    def __post_init__(self) -> None:
        if self.cost < 0:
            raise ValueError(f"item cost must be >= 0, got {self.cost}")
        if self.profit < 0:
            raise ValueError(f"item profit must be >= 0, got {self.profit}")


@dataclass(frozen=True)
class MckpInstance:
    classes: tuple[tuple[MckpItem, ...], ...]
    budget: int

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        if not self.classes or any(not c for c in self.classes):
            raise ValueError("every class must be non-empty")


def make_instance(
    classes: Sequence[Sequence[tuple[int, float] | MckpItem]], budget: int
) -> MckpInstance:
    """Build an instance from (cost, profit) pairs or ready-made items."""
    built = []
    for cls in classes:
        items = tuple(
            it if isinstance(it, MckpItem) else MckpItem(cost=it[0], profit=it[1])
            for it in cls
        )
        built.append(items)
    return MckpInstance(classes=tuple(built), budget=budget)


@dataclass(frozen=True)
class MckpSolution:
    picks: tuple[int, ...]
    total_cost: int
    total_profit: float


def _solution_from_picks(inst: MckpInstance, picks: Sequence[int]) -> MckpSolution:
    cost = sum(inst.classes[i][t].cost for i, t in enumerate(picks))
    profit = sum(inst.classes[i][t].profit for i, t in enumerate(picks))
    return MckpSolution(picks=tuple(picks), total_cost=cost, total_profit=profit)


def mckp_exact_dp(inst: MckpInstance) -> MckpSolution:
    """Profit-maximal solution by dynamic programming over (class, budget).

    Refuses instances with more than DP_CELL_GUARD table cells.  Among
    optimal solutions the lexicographically smallest pick vector is returned.
    """
    k = len(inst.classes)
    budget = inst.budget
    cells = k * (budget + 1)
    if cells > DP_CELL_GUARD:
        raise InfeasibleError(
            f"DP table would need {cells} cells (guard {DP_CELL_GUARD})"
        )
    neg_inf = float("-inf")
    # best[c][b]: max profit using classes c..k-1 with budget b
    best = [[neg_inf] * (budget + 1) for _ in range(k + 1)]
    best[k] = [0.0] * (budget + 1)
    for c in range(k - 1, -1, -1):
        row = best[c]
        nxt = best[c + 1]
        for item in inst.classes[c]:
            if item.cost > budget:
                continue
            for b in range(item.cost, budget + 1):
                rest = nxt[b - item.cost]
                if rest != neg_inf and item.profit + rest > row[b]:
                    row[b] = item.profit + rest
    if best[0][budget] == neg_inf:
        raise InfeasibleError("no feasible pick vector under the budget")

    picks: list[int] = []
    b = budget
    for c in range(k):
        target = best[c][b]
        for t, item in enumerate(inst.classes[c]):
            if item.cost > b:
                continue
            rest = best[c + 1][b - item.cost]
            if rest != neg_inf and abs(item.profit + rest - target) <= 1e-9 * max(
                1.0, abs(target)
            ):
                picks.append(t)
                b -= item.cost
                break
        else:
            raise AssertionError("DP reconstruction failed")
    return _solution_from_picks(inst, picks)


def _hull(items: Sequence[MckpItem]) -> list[tuple[int, MckpItem]]:
    """LP-undominated items of one class as (original index, item), cost-ascending.

    Plain dominance (another item with cost <= and profit >=) is removed
    first, then items under the upper convex hull of (cost, profit).
    """
    order = sorted(range(len(items)), key=lambda t: (items[t].cost, -items[t].profit, t))
    undominated: list[tuple[int, MckpItem]] = []
    best_profit = float("-inf")
    for t in order:
        item = items[t]
        if item.profit > best_profit:
            undominated.append((t, item))
            best_profit = item.profit
    hull: list[tuple[int, MckpItem]] = []
    for t, item in undominated:
        while len(hull) >= 2:
            _, a = hull[-2]
            _, b = hull[-1]
            # slope to b must exceed slope from b onward, else b is LP-dominated
            lhs = (b.profit - a.profit) * (item.cost - b.cost)
            rhs = (item.profit - b.profit) * (b.cost - a.cost)
            if lhs <= rhs:
                hull.pop()
            else:
                break
        hull.append((t, item))
    return hull


def mckp_greedy_half(inst: MckpInstance) -> MckpSolution:
    """Greedy 1/2-approximation (convex-hull efficiency walk).

    Requires a zero-cost item in every class.  Starts from the best zero-cost
    item per class, applies hull upgrades in decreasing incremental
    profit/cost, and returns the better of the greedy fill and the best
    single-item solution, which guarantees profit >= half the optimum.
    """
    budget = inst.budget
    for i, cls in enumerate(inst.classes):
        if not any(item.cost == 0 for item in cls):
            raise ValueError(f"class {i} has no zero-cost item")

    hulls = []
    for cls in inst.classes:
        usable = [
            (t, it) for t, it in enumerate(cls) if it.cost <= budget
        ]
        hulls.append(_hull([it for _, it in usable]))
        # remap hull indices back to original positions in the class
        idx_map = [t for t, _ in usable]
        hulls[-1] = [(idx_map[t], it) for t, it in hulls[-1]]

    picks = [hull[0][0] for hull in hulls]
    positions = [0] * len(hulls)
    spent = sum(hull[0][1].cost for hull in hulls)
    profit = sum(hull[0][1].profit for hull in hulls)

    upgrades = []
    for i, hull in enumerate(hulls):
        for pos in range(1, len(hull)):
            prev = hull[pos - 1][1]
            item = hull[pos][1]
            dc = item.cost - prev.cost
            dp = item.profit - prev.profit
            upgrades.append((-(dp / dc), i, pos, dc, dp))
    upgrades.sort()

    blocked = [False] * len(hulls)
    for _eff, i, pos, dc, dp in upgrades:
        if blocked[i] or positions[i] != pos - 1:
            if positions[i] < pos - 1:
                blocked[i] = True
            continue
        if spent + dc > budget:
            blocked[i] = True
            continue
        positions[i] = pos
        picks[i] = hulls[i][pos][0]
        spent += dc
        profit += dp

    greedy = _solution_from_picks(inst, picks)

    # best single-item solution: all classes at their best zero-cost item,
    # one class upgraded to its most profitable affordable item
    zero_picks = []
    zero_profit = 0.0
    for cls in inst.classes:
        zt = min(
            (t for t, it in enumerate(cls) if it.cost == 0),
            key=lambda t: -cls[t].profit,
        )
        zero_picks.append(zt)
        zero_profit += cls[zt].profit
    best_single = None
    for i, cls in enumerate(inst.classes):
        for t, item in enumerate(cls):
            if item.cost <= budget:
                gain = item.profit - cls[zero_picks[i]].profit
                if best_single is None or gain > best_single[0]:
                    best_single = (gain, i, t)
    single_picks = list(zero_picks)
    if best_single is not None and best_single[0] > 0:
        single_picks[best_single[1]] = best_single[2]
    single = _solution_from_picks(inst, single_picks)

    return greedy if greedy.total_profit >= single.total_profit else single


def mckp_brute_force(inst: MckpInstance) -> MckpSolution:
    """Exhaustive optimum; test oracle for tiny instances."""
    import itertools

    best: MckpSolution | None = None
    for picks in itertools.product(*(range(len(c)) for c in inst.classes)):
        cost = sum(inst.classes[i][t].cost for i, t in enumerate(picks))
        if cost > inst.budget:
            continue
        sol = _solution_from_picks(inst, picks)
        if best is None or sol.total_profit > best.total_profit + 1e-12:
            best = sol
    if best is None:
        raise InfeasibleError("no feasible pick vector under the budget")
    return best
