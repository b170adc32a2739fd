"""Constructing and enumerating extensions of activity networks.

Covers level-constrained extensions, neighbour-synchronisation grids, and
exhaustive enumeration of the closure lattice above a network: minimal
series-parallel extensions, minimal decomposable extensions, the full set
of SP extensions, and seeded random SP extensions for larger instances.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import SizeLimitExceeded
from .network import (ActivityNetwork, _bits, activity_levels,
                      add_pair_closed, from_closure, from_edges)
from .spalgebra import Classification, classify, find_n_witness

DEFAULT_ENUMERATION_LIMIT = 8


def resolve_limit(limit: int | None, default: int = DEFAULT_ENUMERATION_LIMIT) -> int:
    """Explicit argument wins, then SPNET_SIZE_LIMIT, then the default."""
    if limit is not None:
        return limit
    env = os.environ.get("SPNET_SIZE_LIMIT")
    return int(env) if env else default


def _check_size(net: ActivityNetwork, limit: int | None,
                default: int = DEFAULT_ENUMERATION_LIMIT) -> None:
    cap = resolve_limit(limit, default)
    if net.n > cap:
        raise SizeLimitExceeded(
            f"{net.n} activities exceeds enumeration cap {cap}")


def level(net: ActivityNetwork, a: int) -> int:
    """Size of a longest chain ending at activity a."""
    return activity_levels(net)[a]


def levels(net: ActivityNetwork) -> list[list[int]]:
    """Activities partitioned by level; each part is an antichain."""
    lev = activity_levels(net)
    parts: list[list[int]] = [[] for _ in range(max(lev, default=0))]
    for i in range(net.n):
        parts[lev[i] - 1].append(i)
    return parts


def lc_extension(net: ActivityNetwork) -> ActivityNetwork:
    """Level-constrained extension: every lower level precedes every higher.

    Always an extension of net, always series-parallel, and depth-preserving.
    """
    lev = activity_levels(net)
    d = max(lev, default=0)
    above = [0] * (d + 1)  # above[k]: activities with level > k
    for i in range(net.n):
        for k in range(lev[i]):
            above[k] |= 1 << i
    succ = [above[lev[i]] for i in range(net.n)]
    return from_closure(net.n, succ, net.labels)


@dataclass(frozen=True)
class NsSpec:
    """Neighbour-synchronisation grid: depth levels x width columns, each
    activity feeding its `degree` nearest next-level neighbours."""

    depth: int
    width: int
    degree: int

    def __post_init__(self):
        if self.depth < 1 or self.width < 1 or self.degree < 1:
            raise ValueError("depth, width and degree must all be >= 1")

    def activity(self, i: int, j: int) -> int:
        """Id of grid activity at level i, column j (both 1-based)."""
        return (i - 1) * self.width + (j - 1)


def ns_network(spec: NsSpec) -> ActivityNetwork:
    """Build ns(depth, width, degree) with edges (a[i,j], a[i+1,j+k]) for
    k from -floor((degree-1)/2) to ceil((degree-1)/2), clipped to the grid."""
    d, w, deg = spec.depth, spec.width, spec.degree
    lo, hi = -((deg - 1) // 2), deg // 2
    edges = []
    for i in range(1, d):
        for j in range(1, w + 1):
            for k in range(lo, hi + 1):
                if 1 <= j + k <= w:
                    edges.append((spec.activity(i, j), spec.activity(i + 1, j + k)))
    labels = [f"a_{{{i},{j}}}" for i in range(1, d + 1) for j in range(1, w + 1)]
    return from_edges(d * w, edges, labels=labels)


def incomparable_pairs(net: ActivityNetwork) -> list[tuple[int, int]]:
    """All unordered pairs with no precedence either way, sorted."""
    return [(i, j) for i in range(net.n) for j in range(i + 1, net.n)
            if not net.comparable(i, j)]


def _closure_incomparable(succ: tuple[int, ...]):
    n = len(succ)
    for i in range(n):
        for j in range(i + 1, n):
            if not (succ[i] >> j | succ[j] >> i) & 1:
                yield i, j


def _is_subset(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x & ~y == 0 for x, y in zip(a, b))


def _minimal_targets_stats(net: ActivityNetwork,
                           is_target: Callable[[tuple[int, ...]], bool],
                           include_self: bool = True
                           ) -> tuple[list[ActivityNetwork], int]:
    """Closure-minimal extensions of net satisfying is_target, plus the
    number of lattice states visited.

    Breadth-first search over the lattice of transitive closures reachable
    by orienting incomparable pairs; target nodes are never expanded, which
    is sound because any proper superset of a target is non-minimal.  With
    include_self false, only proper extensions count as targets.
    """
    if include_self and is_target(net.succ):
        return [net], 1
    seen = {net.succ}
    frontier = [net.succ]
    found: list[tuple[int, ...]] = []
    while frontier:
        nxt = []
        for succ in frontier:
            for i, j in _closure_incomparable(succ):
                for x, y in ((i, j), (j, i)):
                    child = add_pair_closed(succ, x, y)
                    if child in seen:
                        continue
                    seen.add(child)
                    if is_target(child):
                        found.append(child)
                    else:
                        nxt.append(child)
        frontier = nxt
    minimal = [s for s in found
               if not any(o is not s and _is_subset(o, s) for o in found)]
    minimal.sort()
    return [from_closure(net.n, s, net.labels) for s in minimal], len(seen)


def _minimal_targets(net: ActivityNetwork,
                     is_target: Callable[[tuple[int, ...]], bool],
                     include_self: bool = True) -> list[ActivityNetwork]:
    return _minimal_targets_stats(net, is_target, include_self)[0]


def _succ_is_sp(succ: tuple[int, ...]) -> bool:
    return find_n_witness(from_closure(len(succ), succ)) is None


def minimal_sp_extensions(net: ActivityNetwork,
                          limit: int | None = None) -> list[ActivityNetwork]:
    """All closure-minimal series-parallel extensions, canonically ordered.

    Every SP extension of net contains one of these as a subnetwork; if net
    is already SP the list is just [net].
    """
    _check_size(net, limit)
    return _minimal_targets(net, _succ_is_sp)


def minimal_decomposable_extensions(net: ActivityNetwork,
                                    limit: int | None = None
                                    ) -> list[ActivityNetwork]:
    """Closure-minimal extensions that are not indecomposable."""
    _check_size(net, limit)

    def decomposable(succ: tuple[int, ...]) -> bool:
        return classify(from_closure(len(succ), succ)) is not \
            Classification.INDECOMPOSABLE

    return _minimal_targets(net, decomposable)


def all_sp_extensions(net: ActivityNetwork,
                      limit: int | None = None) -> list[ActivityNetwork]:
    """Every SP extension of net (the whole closure lattice, filtered).

    Exhaustive and therefore limited to small networks; deliberately
    independent of the minimal-extension search so it can serve as an
    oracle for it.
    """
    _check_size(net, limit)
    seen = {net.succ}
    frontier = [net.succ]
    while frontier:
        nxt = []
        for succ in frontier:
            for i, j in _closure_incomparable(succ):
                for x, y in ((i, j), (j, i)):
                    child = add_pair_closed(succ, x, y)
                    if child not in seen:
                        seen.add(child)
                        nxt.append(child)
        frontier = nxt
    sp = sorted(s for s in seen if _succ_is_sp(s))
    return [from_closure(net.n, s, net.labels) for s in sp]


def random_sp_extension(net: ActivityNetwork, seed: int) -> ActivityNetwork:
    """A seeded SP extension: orient random incomparable pairs until N-free."""
    rng = random.Random(seed)
    succ = net.succ
    while not _succ_is_sp(succ):
        pairs = list(_closure_incomparable(succ))
        i, j = pairs[rng.randrange(len(pairs))]
        if rng.random() < 0.5:
            i, j = j, i
        succ = add_pair_closed(succ, i, j)
    return from_closure(net.n, succ, net.labels)
