"""Lifting a base ordering of the real nodes to gap-constrained solutions.

Dummy nodes always appear in the canonical order (sorted by their
neighbor's bottom position), under which no two dummy edges cross. The
side-gap merge splits that order into a left and a right block around the
real nodes; the k-gap merge places it into at most k blocks by a dynamic
program over (gaps used, real prefix, dummy prefix).
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from itertools import accumulate

from .core import (
    BipartiteInstance,
    InputError,
    Permutation,
    concatenate,
    count_crossings,
    restrict_top,
)
from .heuristics import HeuristicKind, heuristic_order


@dataclass(frozen=True)
class CanonicalDummyOrder:
    """Dummies sorted ascending by their neighbor's bottom position
    (ties by id); edge-less dummies sort first with position -1."""

    order: Permutation
    neighbor_pos: dict[int, int]


def canonical_dummy_order(inst: BipartiteInstance) -> CanonicalDummyOrder:
    pos1 = inst.pi1.position
    neighbor_pos: dict[int, int] = {}
    for d in inst.dummy_top_ids:
        b = inst.dummy_neighbor[d]
        neighbor_pos[d] = -1 if b is None else pos1[b]
    order = sorted(neighbor_pos, key=lambda d: (neighbor_pos[d], d))
    return CanonicalDummyOrder(Permutation(tuple(order)), neighbor_pos)


def _check_real_order(inst: BipartiteInstance, real_order: Permutation) -> None:
    if set(real_order.order) != set(inst.real_top_ids):
        raise InputError("real_order is not a permutation of the real top nodes")


def side_gap_merge(inst: BipartiteInstance, real_order: Permutation) -> Permutation:
    """Optimal side-gap placement of the dummies around `real_order`.

    Placing a dummy with neighbor position q on the left costs the summed
    real-degree of bottom nodes before q, on the right the summed
    real-degree after q. Along the canonical dummy order the left cost is
    nondecreasing and the right cost nonincreasing, so the dummies that
    strictly prefer the left form a prefix, found by binary search; ties
    go right. Edge-less dummies cross nothing; they sort first in the
    canonical order and are sent left, keeping the split a prefix.
    """
    _check_real_order(inst, real_order)
    canonical = canonical_dummy_order(inst)
    dummies = canonical.order.order

    degs = [inst.bottom_real_degree[b] for b in inst.pi1.order]
    prefix = [0, *accumulate(degs)]
    total = prefix[-1]

    def prefers_left(d: int) -> bool:
        q = canonical.neighbor_pos[d]
        if q < 0:
            left, right = 0, total
        else:
            left, right = prefix[q], total - prefix[q + 1]
        return left < right

    lo, hi = 0, len(dummies)
    while lo < hi:
        mid = (lo + hi) // 2
        if prefers_left(dummies[mid]):
            lo = mid + 1
        else:
            hi = mid
    return concatenate(dummies[:lo], real_order, dummies[lo:])


@dataclass(frozen=True)
class BlockCostTables:
    """Prefix-summed placement costs for dummy blocks.

    prefix[i][j] sums, over the first j dummies, the cost of sitting
    after the first i real nodes and before the rest; the cost of block
    (j'+1..j) at real boundary i is prefix[i][j] - prefix[i][j'].
    """

    prefix: tuple[tuple[int, ...], ...]


def block_cost_tables(
    inst: BipartiteInstance, real_order: Permutation, dummy_order: Permutation
) -> BlockCostTables:
    pos1 = inst.pi1.position
    neigh = inst.neighbor_positions
    q = [
        -1 if inst.dummy_neighbor[d] is None else pos1[inst.dummy_neighbor[d]]
        for d in dummy_order.order
    ]
    n_real, n_dummy = len(real_order), len(dummy_order)

    # greater[s][t] / less[s][t]: edges of real s with bottom endpoint
    # strictly right / left of dummy t's neighbor. Edge-less dummies
    # (q < 0) cross nothing anywhere.
    greater = []
    less = []
    for r in real_order.order:
        positions = neigh[r]
        greater.append(
            [0 if qt < 0 else len(positions) - bisect_right(positions, qt) for qt in q]
        )
        less.append([0 if qt < 0 else bisect_left(positions, qt) for qt in q])

    rows = []
    above = [0] * n_dummy  # crossings with the real prefix, per dummy
    below = [0] * n_dummy  # crossings with the real suffix, per dummy
    for t in range(n_dummy):
        below[t] = sum(less[s][t] for s in range(n_real))
    for i in range(n_real + 1):
        if i:
            for t in range(n_dummy):
                above[t] += greater[i - 1][t]
                below[t] -= less[i - 1][t]
        rows.append(tuple(accumulate((above[t] + below[t] for t in range(n_dummy)), initial=0)))
    return BlockCostTables(tuple(rows))


_ADVANCE = -1  # backtrack tag: came from dp[g][i-1][j]


@dataclass
class MergeTable:
    """DP table dp[g][i][j]: minimum crossings between real-incident and
    dummy-incident edges when the first j dummies sit in at most g gaps
    at real boundaries <= i. choice[g][i][j] is the backtrack tag:
    _ADVANCE, or the split j' of the block placed at boundary i."""

    dp: list[list[list[int]]]
    choice: list[list[list[int | None]]]
    real_order: Permutation
    dummy_order: Permutation
    costs: BlockCostTables
    infinity: int


def build_merge_table(
    inst: BipartiteInstance, real_order: Permutation, k: int
) -> MergeTable:
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    _check_real_order(inst, real_order)
    dummy_order = canonical_dummy_order(inst).order
    n_real, n_dummy = len(real_order), len(dummy_order)
    k = min(k, max(n_dummy, 1))  # more gaps than dummies never help
    costs = block_cost_tables(inst, real_order, dummy_order)
    s = costs.prefix
    inf = inst.m * inst.m + 1  # above any achievable crossing count

    dp = [[[inf] * (n_dummy + 1) for _ in range(n_real + 1)] for _ in range(k + 1)]
    choice: list[list[list[int | None]]] = [
        [[None] * (n_dummy + 1) for _ in range(n_real + 1)] for _ in range(k + 1)
    ]
    for i in range(n_real + 1):
        dp[0][i][0] = 0

    for g in range(1, k + 1):
        for i in range(n_real + 1):
            prev_gap = dp[g - 1][i]
            row = dp[g][i]
            tags = choice[g][i]
            s_i = s[i]
            for j in range(n_dummy + 1):
                best = inf
                tag: int | None = None
                if i and dp[g][i - 1][j] < best:
                    best = dp[g][i - 1][j]
                    tag = _ADVANCE
                base = s_i[j]
                for jp in range(j + 1):
                    prev = prev_gap[jp]
                    if prev >= inf:
                        continue
                    val = prev + base - s_i[jp]
                    if val < best:
                        best = val
                        tag = jp
                row[j] = best
                tags[j] = tag
    return MergeTable(dp, choice, real_order, dummy_order, costs, inf)


def k_gap_merge(
    inst: BipartiteInstance, real_order: Permutation, k: int
) -> tuple[Permutation, int]:
    """Merge `real_order` with the canonical dummy order using at most k
    gaps, minimizing crossings between real-incident and dummy-incident
    edge pairs. Returns the merged permutation and that mixed cost."""
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    _check_real_order(inst, real_order)
    if not inst.dummy_top_ids:
        return Permutation(real_order.order), 0

    table = build_merge_table(inst, real_order, k)
    dp, choice = table.dp, table.choice
    n_real, n_dummy = len(table.real_order), len(table.dummy_order)
    g, i, j = len(dp) - 1, n_real, n_dummy
    mixed = dp[g][i][j]

    boundary = [0] * n_dummy
    while g > 0:
        tag = choice[g][i][j]
        if tag is None:  # base row reached early; remaining dummies are placed
            break
        if tag == _ADVANCE:
            i -= 1
        else:
            for t in range(tag, j):
                boundary[t] = i
            j = tag
            g -= 1
    assert j == 0, "merge backtrack failed to place every dummy"

    dummies = table.dummy_order.order
    merged: list[int] = []
    t = 0
    for b in range(n_real + 1):
        while t < n_dummy and boundary[t] == b:
            merged.append(dummies[t])
            t += 1
        if b < n_real:
            merged.append(real_order.order[b])
    return Permutation(tuple(merged)), mixed


def solve_sidegaps(
    inst: BipartiteInstance,
    base: HeuristicKind | str = "median",
    time_budget_s: float = 300.0,
) -> Permutation:
    """Order the real nodes with `base` ("median", "barycenter", or
    "exact"), then place all dummies into side gaps."""
    if base == "exact":
        from .exact import solve_sidegap_exact

        result = solve_sidegap_exact(inst, time_budget_s)
        if result.permutation is None:
            raise InputError("exact base produced no permutation within the budget")
        return result.permutation
    real_order = heuristic_order(inst, inst.real_top_ids, base)
    return side_gap_merge(inst, real_order)


def solve_kgaps(
    inst: BipartiteInstance, base: HeuristicKind, k: int
) -> Permutation:
    """Order the real nodes with a heuristic, then merge the dummies in
    with at most k gaps."""
    real_order = heuristic_order(inst, inst.real_top_ids, base)
    permutation, _ = k_gap_merge(inst, real_order, k)
    return permutation


def mixed_crossings(inst: BipartiteInstance, pi2: Permutation) -> int:
    """Crossings between real-incident and dummy-incident edge pairs;
    the quantity the k-gap merge minimizes."""
    total = count_crossings(inst, pi2)
    reals, dummies = inst.real_top_ids, inst.dummy_top_ids
    real_part = count_crossings(restrict_top(inst, reals), pi2.induced(reals))
    dummy_part = count_crossings(restrict_top(inst, dummies), pi2.induced(dummies))
    return total - real_part - dummy_part
