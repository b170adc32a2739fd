"""Minimum series-parallelisation: find an SP extension of least makespan.

Three routes: exact enumeration of the minimal-extension frontier (the
optimum over all SP extensions is attained on a minimal one, since adding
constraints never shrinks the makespan), an exact branch-and-bound that
splits on orientations inside a violating N pattern, and the polynomial
level-constrained approximation whose slowdown is capped by the duration
ratio.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .errors import SizeLimitExceeded, SlowdownBoundViolation
from .extensions import (_minimal_targets_stats, _succ_is_sp, lc_extension,
                         resolve_limit)
from .network import (ActivityNetwork, Workload, _bits, add_pair_closed,
                      from_closure, from_edges, makespan, maximal_chains,
                      topological_order)
from .serialize import format_rational, network_to_doc
from .slowdown import rho
from .spalgebra import find_n_witness, is_series_parallel


@dataclass(frozen=True)
class MspSolution:
    extension: ActivityNetwork
    makespan: Fraction
    slowdown: Fraction
    method: str  # "brute", "bnb" or "lc"
    nodes_explored: int

    def to_jsonable(self) -> dict:
        return {
            "method": self.method,
            "makespan": format_rational(self.makespan),
            "slowdown": format_rational(self.slowdown),
            "nodes_explored": self.nodes_explored,
            "extension": network_to_doc(self.extension),
        }


@lru_cache(maxsize=4096)
def _sp_frontier(succ: tuple[int, ...]
                 ) -> tuple[tuple[tuple[tuple[int, ...], ...], ...], int]:
    """Maximal chains of every minimal SP extension of the closure, plus
    the number of lattice states the enumeration visited.

    Cached on the closure so repeated workloads on one network reuse the
    enumeration; the closures themselves are recovered cheaply from the
    chains when needed.
    """
    net = from_closure(len(succ), succ)
    nets, visited = _minimal_targets_stats(net, _succ_is_sp)
    return tuple(tuple(maximal_chains(h)) for h in nets), visited


def _chains_weight(chains: Sequence[tuple[int, ...]],
                   scaled: Sequence[int]) -> int:
    return max(sum(scaled[i] for i in chain) for chain in chains)


def _scaled(t: Workload) -> tuple[list[int], int]:
    den = 1
    for d in t.durations:
        den = den * d.denominator // math.gcd(den, d.denominator)
    return [int(d * den) for d in t.durations], den


def msp_brute(net: ActivityNetwork, t: Workload,
              limit: int | None = None) -> MspSolution:
    """Global minimum of the makespan over all SP extensions.

    Evaluates every closure-minimal SP extension; ties break toward the
    smallest closure, so the reported extension is deterministic.
    """
    cap = resolve_limit(limit)
    if net.n > cap:
        raise SizeLimitExceeded(f"{net.n} activities exceeds cap {cap}")
    frontiers, visited = _sp_frontier(net.succ)
    scaled, den = _scaled(t)
    base = _chains_weight(maximal_chains(net), scaled)
    best_idx = 0
    best = None
    for idx, chains in enumerate(frontiers):
        value = _chains_weight(chains, scaled)
        if best is None or value < best:
            best, best_idx = value, idx
    # Maximal chains walk the transitive reduction, so their consecutive
    # pairs rebuild the winning extension exactly.
    edges = [(c[k], c[k + 1]) for c in frontiers[best_idx]
             for k in range(len(c) - 1)]
    winner = from_edges(net.n, edges, labels=net.labels)
    return MspSolution(winner, Fraction(best, den),
                       Fraction(best, base), "brute", visited)


def msp_lc(net: ActivityNetwork, t: Workload) -> MspSolution:
    """Polynomial-time approximation via the level-constrained extension."""
    ext = lc_extension(net)
    value = makespan(ext, t)
    sd = value / makespan(net, t)
    bound = rho(t)
    if sd > bound:
        raise SlowdownBoundViolation(
            "level-constrained slowdown exceeded the duration ratio",
            {"network": net.closure_pairs(),
             "durations": [format_rational(d) for d in t.durations],
             "slowdown": format_rational(sd),
             "rho": format_rational(bound)})
    return MspSolution(ext, value, sd, "lc", 1)


def msp_branch_and_bound(net: ActivityNetwork, t: Workload,
                         limit: int | None = None) -> MspSolution:
    """Exact optimum by branching on orientations that break an N pattern.

    Every SP extension must order one of the three incomparable pairs of
    any embedded N, so the six orientations cover all of them; the current
    makespan lower-bounds every completion and prunes against the
    incumbent, which starts at the level-constrained solution.
    """
    cap = resolve_limit(limit, 12)
    if net.n > cap:
        raise SizeLimitExceeded(f"{net.n} activities exceeds cap {cap}")
    if is_series_parallel(net):
        return MspSolution(net, makespan(net, t), Fraction(1), "bnb", 1)
    scaled, den = _scaled(t)
    base_chains = maximal_chains(net)
    base = _chains_weight(base_chains, scaled)

    lc = msp_lc(net, t)
    incumbent_value = int(lc.makespan * den)
    incumbent_succ = lc.extension.succ
    nodes = 0
    seen: set[tuple[int, ...]] = set()

    def weight(succ: tuple[int, ...]) -> int:
        h = from_closure(len(succ), succ)
        finish = [0] * h.n
        best = 0
        for i in topological_order(h):
            f = 0
            for p in _bits(h.pred[i]):
                if finish[p] > f:
                    f = finish[p]
            finish[i] = f + scaled[i]
            if finish[i] > best:
                best = finish[i]
        return best

    stack = [net.succ]
    while stack:
        succ = stack.pop()
        if succ in seen:
            continue
        seen.add(succ)
        nodes += 1
        value = weight(succ)
        if value >= incumbent_value:
            continue
        witness = find_n_witness(from_closure(len(succ), succ))
        if witness is None:
            incumbent_value, incumbent_succ = value, succ
            continue
        a, b, c, d = witness
        for x, y in ((a, b), (b, c), (c, d)):
            stack.append(add_pair_closed(succ, x, y))
            stack.append(add_pair_closed(succ, y, x))

    winner = from_closure(net.n, incumbent_succ, net.labels)
    return MspSolution(winner, Fraction(incumbent_value, den),
                       Fraction(incumbent_value, base), "bnb", nodes)


def solve(net: ActivityNetwork, t: Workload, method: str,
          limit: int | None = None) -> MspSolution:
    if method == "brute":
        return msp_brute(net, t, limit)
    if method == "bnb":
        return msp_branch_and_bound(net, t, limit)
    if method == "lc":
        return msp_lc(net, t)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Randomized evidence sweep for the 4/3 bound

def random_workload(n: int, rng: random.Random) -> Workload:
    """Random exact-rational durations: mostly integers, some fractions."""
    values = []
    for _ in range(n):
        if rng.random() < 0.25:
            values.append(Fraction(rng.randint(1, 64), rng.randint(1, 16)))
        else:
            values.append(Fraction(rng.randint(1, 64)))
    return Workload(tuple(values))


def factor_43_sweep(max_n: int = 6, workloads: int = 1000,
                    seed: int = 20260810,
                    bound: Fraction = Fraction(4, 3),
                    log: Callable[[str], None] | None = None) -> dict:
    """Optimal-SP slowdown of every non-SP poset with up to max_n
    activities, under `workloads` random rational workloads each.

    Any slowdown above the bound would be a genuine counterexample to the
    4/3 conjecture: the sweep aborts with a full dump rather than recording
    it quietly.
    """
    from .conjecture import enumerate_posets
    say = log or (lambda msg: None)
    t0 = time.perf_counter()
    rng = random.Random(seed)
    posets = 0
    evaluations = 0
    worst = Fraction(0)
    for n in range(4, max_n + 1):
        nets = [g for g in enumerate_posets(n) if not is_series_parallel(g)]
        say(f"n={n}: sweeping {len(nets)} non-SP classes")
        for g in nets:
            posets += 1
            for _ in range(workloads):
                t = random_workload(n, rng)
                sol = msp_brute(g, t)
                evaluations += 1
                if sol.slowdown > worst:
                    worst = sol.slowdown
                if sol.slowdown > bound:
                    raise SlowdownBoundViolation(
                        "optimal SP slowdown exceeded the conjectured bound",
                        {"network": network_to_doc(g),
                         "workload": [format_rational(d) for d in t.durations],
                         "slowdown": format_rational(sol.slowdown),
                         "bound": format_rational(bound),
                         "extension": network_to_doc(sol.extension)})
    return {
        "max_n": max_n,
        "posets": posets,
        "workloads_per_poset": workloads,
        "evaluations": evaluations,
        "bound": format_rational(bound),
        "max_slowdown_seen": format_rational(worst),
        "elapsed_seconds": round(time.perf_counter() - t0, 3),
    }
