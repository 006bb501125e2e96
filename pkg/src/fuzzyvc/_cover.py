"""Exact minimum set cover over bitmasks.

Both minimum hitting sets (transversals, nets) and minimum covers (covering
numbers, strong disambiguations) reduce to this: given a universe mask and a
list of candidate masks, choose the fewest candidates whose union is the
universe.
"""

from __future__ import annotations

from typing import Sequence

from .errors import InfeasibleError


def _prune(universe: int, candidates: Sequence[int]) -> list[tuple[int, int]]:
    # keep one representative per distinct mask, drop dominated masks
    first: dict[int, int] = {}
    for idx, mask in enumerate(candidates):
        mask &= universe
        if mask and mask not in first:
            first[mask] = idx
    masks = sorted(first, key=lambda m: (-m.bit_count(), first[m]))
    kept: list[int] = []
    for m in masks:
        if not any(m & k == m for k in kept):
            kept.append(m)
    return [(m, first[m]) for m in kept]


def _greedy(universe: int, pool: list[tuple[int, int]]) -> list[int]:
    chosen = []
    left = universe
    while left:
        mask, idx = max(pool, key=lambda p: ((p[0] & left).bit_count(), -p[1]))
        chosen.append(idx)
        left &= ~mask
    return chosen


def _disjoint_bound(left: int, pool: list[tuple[int, int]]) -> int:
    # greedy packing of elements no two of which share a candidate
    bound = 0
    blocked = 0
    rest = left
    while rest:
        low = rest & -rest
        rest ^= low
        if low & blocked:
            continue
        bound += 1
        for mask, _ in pool:
            if mask & low:
                blocked |= mask
    return bound


def min_set_cover(universe: int, candidates: Sequence[int], lower_bound: int = 0) -> list[int]:
    """Return indices of a minimum-size subfamily of ``candidates`` covering ``universe``.

    ``lower_bound`` is a known bound on the optimum (e.g. a rounded LP value);
    the search stops as soon as an incumbent attains it.
    """
    if not universe:
        return []
    pool = _prune(universe, candidates)
    reach = 0
    for mask, _ in pool:
        reach |= mask
    if reach != universe:
        raise InfeasibleError("some element is covered by no candidate")

    best = _greedy(universe, pool)
    if len(best) <= max(lower_bound, 1):
        return sorted(best)

    by_elem: dict[int, list[tuple[int, int]]] = {}
    rest = universe
    while rest:
        low = rest & -rest
        rest ^= low
        by_elem[low] = [p for p in pool if p[0] & low]

    def search(left: int, chosen: list[int]) -> None:
        nonlocal best
        if not left:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + _disjoint_bound(left, pool) >= len(best):
            return
        widest = max((m & left).bit_count() for m, _ in pool)
        need = -(-left.bit_count() // widest)
        if len(chosen) + need >= len(best):
            return
        # branch on the element with the fewest covering candidates
        elem = None
        options: list[tuple[int, int]] = []
        rest = left
        while rest:
            low = rest & -rest
            rest ^= low
            opts = by_elem[low]
            if elem is None or len(opts) < len(options):
                elem, options = low, opts
                if len(opts) == 1:
                    break
        for mask, idx in sorted(options, key=lambda p: -(p[0] & left).bit_count()):
            chosen.append(idx)
            search(left & ~mask, chosen)
            chosen.pop()
            if len(best) <= max(lower_bound, 1):
                return

    search(universe, [])
    return sorted(best)


def min_hitting_set(sets: Sequence[int], ground_size: int, lower_bound: int = 0) -> list[int]:
    """Minimum set of points (indices below ``ground_size``) meeting every mask in ``sets``."""
    universe = (1 << len(sets)) - 1
    columns = []
    for x in range(ground_size):
        bit = 1 << x
        col = 0
        for j, s in enumerate(sets):
            if s & bit:
                col |= 1 << j
        columns.append(col)
    return min_set_cover(universe, columns, lower_bound)


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out
