"""Activity networks: transitively closed precedence relations plus workloads.

Activities are ids 0..n-1.  The precedence relation is kept as its
transitive closure, stored densely as one successor bitmask per activity,
so membership tests and closure updates are single integer operations
regardless of n.  Networks and workloads are immutable; every operation
here is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

from .errors import CycleError, IdOutOfRange, MissingDuration, NotAnExtension


@dataclass(frozen=True)
class ActivityNetwork:
    """A transitively closed, irreflexive, acyclic precedence relation.

    succ[i] is the bitmask of all j with i strictly before j; pred is the
    derived inverse.  Construct through from_edges / from_closure, which
    validate and keep the two sides consistent.
    """

    n: int
    succ: tuple[int, ...]
    pred: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def precedes(self, i: int, j: int) -> bool:
        return bool(self.succ[i] >> j & 1)

    def comparable(self, i: int, j: int) -> bool:
        return bool((self.succ[i] >> j | self.succ[j] >> i) & 1)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def closure_pairs(self) -> list[tuple[int, int]]:
        """All ordered pairs of the transitive closure, lexicographic."""
        return [(i, j) for i in range(self.n) for j in _bits(self.succ[i])]

    def relabel(self, labels: Sequence[str] | None) -> "ActivityNetwork":
        return ActivityNetwork(self.n, self.succ, self.pred,
                               None if labels is None else tuple(labels))


@dataclass(frozen=True)
class Workload:
    """Strictly positive exact durations, indexed by activity id."""

    durations: tuple[Fraction, ...]

    def __post_init__(self):
        for i, d in enumerate(self.durations):
            if d <= 0:
                raise ValueError(f"duration of activity {i} must be > 0, got {d}")

    @classmethod
    def of(cls, *values) -> "Workload":
        return cls(tuple(Fraction(v) for v in values))

    def __getitem__(self, i: int) -> Fraction:
        return self.durations[i]

    def __len__(self) -> int:
        return len(self.durations)


def _bits(mask: int):
    """Yield set bit positions of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _preds_from_succ(n: int, succ: Sequence[int]) -> tuple[int, ...]:
    pred = [0] * n
    for i in range(n):
        for j in _bits(succ[i]):
            pred[j] |= 1 << i
    return tuple(pred)


def from_closure(n: int, succ: Sequence[int],
                 labels: Sequence[str] | None = None) -> ActivityNetwork:
    """Wrap an already transitively closed successor table (unvalidated)."""
    return ActivityNetwork(n, tuple(succ), _preds_from_succ(n, succ),
                           None if labels is None else tuple(labels))


def from_edges(n: int, edges: Iterable[tuple[int, int]],
               labels: Sequence[str] | None = None) -> ActivityNetwork:
    """Build a network as the transitive closure of the given edges.

    Edge order is irrelevant.  Raises IdOutOfRange for ids outside 0..n-1
    and CycleError if the edges close into a directed cycle.
    """
    direct = [0] * n
    for i, j in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise IdOutOfRange(f"edge ({i},{j}) outside 0..{n - 1}")
        if i != j:
            direct[i] |= 1 << j
        else:
            raise CycleError(f"self-loop on activity {i}")
    succ = _close(n, direct)
    for i in range(n):
        if succ[i] >> i & 1:
            raise CycleError(f"activity {i} reaches itself")
    return from_closure(n, succ, labels)


def _close(n: int, direct: Sequence[int]) -> list[int]:
    """Transitive closure of a successor table (may expose cycles as i->i)."""
    succ = list(direct)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = succ[i]
            for j in _bits(succ[i]):
                acc |= succ[j]
            if acc != succ[i]:
                succ[i] = acc
                changed = True
    return succ


def add_pair_closed(succ: tuple[int, ...], i: int, j: int) -> tuple[int, ...]:
    """Closure of succ plus the pair (i,j); i and j must be incomparable."""
    n = len(succ)
    below = 1 << i
    for x in range(n):
        if succ[x] >> i & 1:
            below |= 1 << x
    above = succ[j] | 1 << j
    out = list(succ)
    for x in _bits(below):
        out[x] |= above
    return tuple(out)


def topological_order(net: ActivityNetwork) -> list[int]:
    """Activity ids sorted so predecessors come first (stable by id)."""
    # For a closed relation, predecessor-set size is a valid topological key.
    return sorted(range(net.n), key=lambda i: (net.pred[i].bit_count(), i))


def transitive_reduction(net: ActivityNetwork) -> list[tuple[int, int]]:
    """The unique minimal edge set whose closure is net's closure, sorted."""
    out = []
    for i in range(net.n):
        for j in _bits(net.succ[i]):
            if not net.succ[i] & net.pred[j]:
                out.append((i, j))
    return out


def activity_levels(net: ActivityNetwork) -> list[int]:
    """Level of each activity: the size of a longest chain ending there."""
    lev = [0] * net.n
    for i in topological_order(net):
        best = 0
        for p in _bits(net.pred[i]):
            if lev[p] > best:
                best = lev[p]
        lev[i] = best + 1
    return lev


def depth(net: ActivityNetwork) -> int:
    """Size of a largest chain."""
    if net.n == 0:
        return 0
    return max(activity_levels(net))


def width(net: ActivityNetwork) -> int:
    """Size of a largest antichain, via minimum chain cover (Dilworth)."""
    n = net.n
    match_of = [-1] * n  # right vertex j -> matched left vertex

    def augment(i: int, seen: list[bool]) -> bool:
        for j in _bits(net.succ[i]):
            if not seen[j]:
                seen[j] = True
                if match_of[j] < 0 or augment(match_of[j], seen):
                    match_of[j] = i
                    return True
        return False

    matching = 0
    for i in range(n):
        if augment(i, [False] * n):
            matching += 1
    return n - matching


def is_chain(net: ActivityNetwork, activities: Sequence[int]) -> bool:
    """True iff the sequence is totally ordered in listed order."""
    return all(net.precedes(activities[k], activities[m])
               for k in range(len(activities))
               for m in range(k + 1, len(activities)))


def is_antichain(net: ActivityNetwork, activities: Iterable[int]) -> bool:
    acts = list(activities)
    return all(not net.comparable(acts[k], acts[m])
               for k in range(len(acts))
               for m in range(k + 1, len(acts)))


def maximal_chains(net: ActivityNetwork) -> list[tuple[int, ...]]:
    """All chains extendable by no activity, sorted lexicographically.

    Maximal chains are exactly the minimal-to-maximal paths of the
    transitive reduction.
    """
    n = net.n
    cover = [0] * n
    for i, j in transitive_reduction(net):
        cover[i] |= 1 << j
    out: list[tuple[int, ...]] = []

    def walk(path: list[int]):
        tail = path[-1]
        if not cover[tail]:
            out.append(tuple(path))
            return
        for j in _bits(cover[tail]):
            path.append(j)
            walk(path)
            path.pop()

    for i in range(n):
        if not net.pred[i]:
            walk([i])
    out.sort()
    return out


def _scaled_durations(net: ActivityNetwork, t: Workload) -> tuple[list[int], int]:
    """Durations as integers over a common denominator (exactness-preserving)."""
    if len(t) != net.n:
        raise MissingDuration(
            f"workload covers {len(t)} activities, network has {net.n}")
    den = 1
    for d in t.durations:
        den = den * d.denominator // math.gcd(den, d.denominator)
    return [int(d * den) for d in t.durations], den


def makespan(net: ActivityNetwork, t: Workload) -> Fraction:
    """Weight of a heaviest chain, by longest-path dynamic programming."""
    scaled, den = _scaled_durations(net, t)
    finish = [0] * net.n
    best = 0
    for i in topological_order(net):
        f = 0
        for p in _bits(net.pred[i]):
            if finish[p] > f:
                f = finish[p]
        finish[i] = f + scaled[i]
        if finish[i] > best:
            best = finish[i]
    return Fraction(best, den)


def critical_path(net: ActivityNetwork, t: Workload) -> tuple[int, ...]:
    """A maximal chain attaining the makespan (smallest-id backtrace).

    Positive durations make every backtrace step a covering pair, so the
    result is maximal; choices are by ascending id, so it is deterministic.
    """
    scaled, _ = _scaled_durations(net, t)
    finish = [0] * net.n
    for i in topological_order(net):
        f = 0
        for p in _bits(net.pred[i]):
            if finish[p] > f:
                f = finish[p]
        finish[i] = f + scaled[i]
    if net.n == 0:
        return ()
    best = max(finish)
    cur = min(i for i in range(net.n) if finish[i] == best)
    path = [cur]
    while True:
        want = finish[cur] - scaled[cur]
        nxt = [p for p in _bits(net.pred[cur]) if finish[p] == want]
        if not nxt:
            break
        cur = nxt[0]
        path.append(cur)
    path.reverse()
    return tuple(path)


def is_extension(base: ActivityNetwork, ext: ActivityNetwork) -> bool:
    """True iff ext has the same activities and a superset closure."""
    return base.n == ext.n and all(
        base.succ[i] & ~ext.succ[i] == 0 for i in range(base.n))


def slowdown(base: ActivityNetwork, ext: ActivityNetwork, t: Workload) -> Fraction:
    """makespan(ext)/makespan(base); at least 1 whenever ext extends base."""
    if not is_extension(base, ext):
        raise NotAnExtension("second network does not extend the first")
    return makespan(ext, t) / makespan(base, t)


def dual(net: ActivityNetwork) -> ActivityNetwork:
    """The network with every precedence reversed."""
    return ActivityNetwork(net.n, net.pred, net.succ, net.labels)


# ---------------------------------------------------------------------------
# Canonical forms (isomorphism keys)

def _refined_classes(net: ActivityNetwork) -> list[list[int]]:
    """Partition activities by iterated structural invariants.

    Colors start from (level, dual level, indegree, outdegree) and are
    refined with neighbour color multisets until stable.  Color names are
    re-derived from sorted color keys each round, so the partition and its
    ordering are permutation-invariant.
    """
    n = net.n
    lev = activity_levels(net)
    colev = activity_levels(dual(net))
    color = [(lev[i], colev[i], net.pred[i].bit_count(), net.succ[i].bit_count())
             for i in range(n)]
    while True:
        keys = [(color[i],
                 tuple(sorted(color[p] for p in _bits(net.pred[i]))),
                 tuple(sorted(color[s] for s in _bits(net.succ[i]))))
                for i in range(n)]
        ranking = {k: r for r, k in enumerate(sorted(set(keys)))}
        new = [(ranking[keys[i]],) for i in range(n)]
        if len(set(new)) == len(set(color)):
            break
        color = new
    classes: dict[tuple, list[int]] = {}
    for i in range(n):
        classes.setdefault(color[i], []).append(i)
    return [classes[c] for c in sorted(classes)]


def canonical_form(net: ActivityNetwork) -> tuple[int, ...]:
    """A key equal for two networks iff they are isomorphic unlabeled DAGs.

    Minimizes the closure encoding over all vertex bijections that respect
    the refined invariant classes; within a class, interchangeable twins
    (equal predecessor and successor sets) are tried once.  The key lists,
    per position, the closure edges into and out of earlier positions, so
    the canonical representative can be rebuilt from it.
    """
    n = net.n
    class_of_pos: list[list[int]] = []
    for cls in _refined_classes(net):
        for _ in cls:
            class_of_pos.append(cls)

    best: list[tuple[int, int]] | None = None

    def entry_for(v: int, prefix: list[int]) -> tuple[int, int]:
        in_mask = out_mask = 0
        for p, u in enumerate(prefix):
            if net.succ[u] >> v & 1:
                in_mask |= 1 << p
            elif net.succ[v] >> u & 1:
                out_mask |= 1 << p
        return (in_mask, out_mask)

    def search(prefix: list[int], entries: list[tuple[int, int]]):
        nonlocal best
        p = len(prefix)
        if p == n:
            if best is None or entries < best:
                best = list(entries)
            return
        used = set(prefix)
        cands = [v for v in class_of_pos[p] if v not in used]
        seen_twin: set[tuple[int, int]] = set()
        ranked: list[tuple[tuple[int, int], int]] = []
        for v in cands:
            sig = (net.pred[v], net.succ[v])
            if sig in seen_twin:
                continue
            seen_twin.add(sig)
            ranked.append((entry_for(v, prefix), v))
        low = min(e for e, _ in ranked)
        if best is not None and entries + [low] > best[:p + 1]:
            return
        for e, v in ranked:
            if e == low:
                prefix.append(v)
                entries.append(e)
                search(prefix, entries)
                prefix.pop()
                entries.pop()

    if n == 0:
        return (0,)
    search([], [])
    assert best is not None
    flat: list[int] = [n]
    for in_mask, out_mask in best:
        flat.extend((in_mask, out_mask))
    return tuple(flat)


def network_from_canonical(key: tuple[int, ...]) -> ActivityNetwork:
    """Rebuild the canonical representative network from its key."""
    n = key[0]
    edges = []
    for p in range(n):
        in_mask, out_mask = key[1 + 2 * p], key[2 + 2 * p]
        edges.extend((q, p) for q in _bits(in_mask))
        edges.extend((p, q) for q in _bits(out_mask))
    return from_edges(n, edges)


def are_isomorphic(a: ActivityNetwork, b: ActivityNetwork) -> bool:
    return canonical_form(a) == canonical_form(b)


def brute_force_isomorphic(a: ActivityNetwork, b: ActivityNetwork) -> bool:
    """Permutation-search oracle used to cross-check canonical_form."""
    if a.n != b.n:
        return False
    for perm in permutations(range(a.n)):
        if all((a.succ[i] >> j & 1) == (b.succ[perm[i]] >> perm[j] & 1)
               for i in range(a.n) for j in range(a.n)):
            return True
    return False
