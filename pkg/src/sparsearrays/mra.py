"""Exhaustive search for sum minimum-redundancy arrays (additive 2-bases).

Depth-first search over normalized position sets in increasing order. Sets
are kept as int bitsets so extending a partial array by one element costs a
shift and an OR. Two standard prunings keep the tree small:

* the next element may not exceed the current first hole of ``D + D``,
  otherwise that hole can never be filled;
* a counting bound: ``r`` more elements added to an ``i``-element set create
  at most ``r*i + r*(r+1)/2`` new sums.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .coarray import SensorArray, lowest_zero_bit, sum_mask, varsigma

log = logging.getLogger(__name__)

DEFAULT_LIMIT = 12


class SearchTooLarge(ValueError):
    """Requested size is above the configured exhaustive-search limit."""


@dataclass
class _Stats:
    nodes: int = 0


@dataclass(frozen=True)
class MraResult:
    array: SensorArray
    contiguous_dof: int
    restricted: bool
    ties: tuple[SensorArray, ...] = field(default=(), repr=False)
    nodes: int = 0


def _pick(ties: list[tuple[int, ...]]) -> tuple[SensorArray, tuple[SensorArray, ...]]:
    arrays = [SensorArray(t) for t in ties]
    ref = max(a.aperture() for a in arrays)
    ranked = sorted(arrays, key=lambda a: (varsigma(a, ref), a.positions))
    return ranked[0], tuple(ranked)


def _count_bound(sm: int, size: int, r: int) -> int:
    return sm.bit_count() + r * size + r * (r + 1) // 2


def _general(n: int, floor: int, stats: _Stats) -> tuple[int, list[tuple[int, ...]]]:
    """All sets of ``n`` elements maximizing the first hole of ``D + D``.

    ``floor`` is a first-hole value known to be attainable; branches that
    cannot reach it are cut. Returns (best hole, all maximizers).
    """
    best = floor
    found: list[tuple[int, ...]] = []
    elems = [0, 1]

    def dfs(em: int, sm: int, last: int, r: int):
        nonlocal best, found
        stats.nodes += 1
        hole = lowest_zero_bit(sm)
        if r == 0:
            if hole > best:
                best, found = hole, [tuple(elems)]
            elif hole == best:
                found.append(tuple(elems))
            return
        size = len(elems)
        if _count_bound(sm, size, r) < best:
            return
        # every new element at most doubles the reachable hole
        if ((hole + 1) << r) - 1 < best:
            return
        for a in range(hole, last, -1):
            elems.append(a)
            dfs(em | (1 << a), sm | (em << a) | (1 << (2 * a)), a, r - 1)
            elems.pop()

    dfs(0b11, 0b111, 1, n - 2)
    return best, found


def _restricted_at(n: int, L: int, stats: _Stats, stop_at_first: bool = False) -> list[tuple[int, ...]]:
    """All ``n``-element sets with aperture ``L`` and ``D + D = {0..2L}``."""
    full = (1 << (2 * L + 1)) - 1
    inner = n - 4
    found: list[tuple[int, ...]] = []
    elems = [0, 1]
    top = [L - 1, L]
    em0 = 0b11 | (1 << (L - 1)) | (1 << L)
    sm0 = sum_mask([0, 1, L - 1, L])

    def dfs(em: int, sm: int, last: int, r: int) -> bool:
        stats.nodes += 1
        if r == 0:
            if sm == full:
                found.append(tuple(elems + top))
                return stop_at_first
            return False
        size = len(elems) + 2
        if _count_bound(sm, size, r) < 2 * L + 1:
            return False
        hole = lowest_zero_bit(sm)
        hi = min(hole, L - 2)
        # with one element left it alone must reach the highest missing sum
        missing_top = (full & ~sm).bit_length() - 1
        for a in range(hi, last, -1):
            if r == 1 and a + L < missing_top:
                break
            elems.append(a)
            if dfs(em | (1 << a), sm | (em << a) | (1 << (2 * a)), a, r - 1):
                return True
            elems.pop()
        return False

    if inner < 0:
        return found
    dfs(em0, sm0, 1, inner)
    return found


def _restricted(n: int, stats: _Stats) -> tuple[int, list[tuple[int, ...]]]:
    if n == 1:
        return 0, [(0,)]
    if n == 2:
        return 1, [(0, 1)]
    if n == 3:
        return 2, [(0, 1, 2)]
    # counting bound: at most n(n+1)/2 sums, and L = L + 0 = (L-1) + 1
    L = (n * (n + 1) // 2 - 2) // 2
    while L >= n - 1:
        sols = _restricted_at(n, L, stats)
        if sols:
            return L, sols
        L -= 1
    raise AssertionError("the ULA is always feasible")


def exhaustive_search(n: int, restricted: bool = False, limit: int = DEFAULT_LIMIT,
               floor: int | None = None) -> MraResult:
    """Exhaustive sum MRA / restricted MRA search.

    Maximizes the first hole of ``D + D`` (restricted: the aperture, with
    ``D + D`` contiguous). Ties are broken by the smallest regularizer value,
    computed with the largest aperture among the tied arrays, then by the
    lexicographically smallest position tuple.
    """
    if n < 1:
        raise ValueError("need at least one sensor")
    if n > limit:
        raise SearchTooLarge(f"search space too large: n={n} exceeds limit {limit}")
    stats = _Stats()
    if restricted:
        L, sols = _restricted(n, stats)
        h = 2 * L + 1
    elif n <= 2:
        h, sols = (1, [(0,)]) if n == 1 else (3, [(0, 1)])
    else:
        if floor is None:
            # any restricted solution is attainable
            floor = 2 * _restricted(n, stats)[0] + 1
        h, sols = _general(n, floor, stats)
    best, ties = _pick(sols)
    log.debug("exhaustive_search n=%d restricted=%s: H=%d, %d ties, %d nodes",
              n, restricted, h, len(ties), stats.nodes)
    return MraResult(best, h, restricted, ties, stats.nodes)
