"""Slowdown bounds and constructions.

The duration-ratio bound on level-constrained slowdown, heavy-diagonal
workloads on neighbour-synchronisation grids, and the adversarial-workload
construction that forces slowdown above 2 on every series-parallel
extension of ns(3,8,3).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (NotAnExtension, NotAntichain, NotSeriesParallel,
                     SlowdownBoundViolation, SpecTooNarrow, TripleNotFound)
from .extensions import NsSpec, lc_extension, ns_network
from .network import (ActivityNetwork, Workload, critical_path, depth,
                      is_antichain, is_chain, is_extension, makespan)
from .spalgebra import is_series_parallel


def rho(t: Workload) -> Fraction:
    """Ratio of the largest to the smallest duration; at least 1."""
    if not len(t):
        raise ValueError("empty workload")
    return max(t.durations) / min(t.durations)


@dataclass(frozen=True)
class SlowdownReport:
    base_makespan: Fraction
    extension_makespan: Fraction
    slowdown: Fraction
    rho: Fraction
    witness_chain: tuple[int, ...]

    def to_jsonable(self, net: ActivityNetwork | None = None) -> dict:
        label = (lambda i: net.label(i)) if net is not None else str
        return {
            "base_makespan": str(self.base_makespan),
            "extension_makespan": str(self.extension_makespan),
            "slowdown": str(self.slowdown),
            "rho": str(self.rho),
            "witness_chain": [label(i) for i in self.witness_chain],
        }


def extension_report(base: ActivityNetwork, ext: ActivityNetwork,
                     t: Workload) -> SlowdownReport:
    if not is_extension(base, ext):
        raise NotAnExtension("second network does not extend the first")
    tb, te = makespan(base, t), makespan(ext, t)
    return SlowdownReport(tb, te, te / tb, rho(t), critical_path(ext, t))


def lc_slowdown_report(net: ActivityNetwork, t: Workload) -> SlowdownReport:
    """Report for the level-constrained extension; slowdown never exceeds
    the duration ratio, and a violation would be a library bug, so it is
    checked on every call."""
    report = extension_report(net, lc_extension(net), t)
    if report.slowdown > report.rho:
        raise SlowdownBoundViolation(
            "level-constrained slowdown exceeded the duration ratio",
            {"network": net.closure_pairs(),
             "durations": [str(d) for d in t.durations],
             "report": report.to_jsonable()})
    return report


def heavy_ns_workload(spec: NsSpec, heavy: Fraction | int) -> Workload:
    """Unit durations except one heavy activity per level, at column 2i-1.

    The staircase placement keeps the heavy activities pairwise
    incomparable for degree 3, so only one of them can sit on any chain.
    Requires width >= 2*depth - 1 so every level gets its heavy column.
    """
    heavy = Fraction(heavy)
    if heavy <= 1:
        raise ValueError(f"heavy duration must exceed 1, got {heavy}")
    if spec.width < 2 * spec.depth - 1:
        raise SpecTooNarrow(
            f"width {spec.width} cannot place heavy column {2 * spec.depth - 1}")
    durations = [Fraction(1)] * (spec.depth * spec.width)
    for i in range(1, spec.depth + 1):
        durations[spec.activity(i, 2 * i - 1)] = heavy
    return Workload(tuple(durations))


def heavy_ns_lc_report(spec: NsSpec, heavy: Fraction | int) -> SlowdownReport:
    """Level-constrained slowdown of a heavy-diagonal NS grid.

    For width 2*depth-1 the slowdown is depth*C / (C + depth - 1), which
    approaches the duration ratio C as depth grows.
    """
    return lc_slowdown_report(ns_network(spec), heavy_ns_workload(spec, heavy))


def find_forced_chain_triple(base: ActivityNetwork, ext: ActivityNetwork
                             ) -> tuple[int, int, int] | None:
    """First 3-subset forming an antichain in base but a chain in ext."""
    if not is_extension(base, ext):
        raise NotAnExtension("second network does not extend the first")
    for triple in combinations(range(base.n), 3):
        if is_antichain(base, triple) and all(
                ext.comparable(x, y) for x, y in combinations(triple, 2)):
            return triple
    return None


def adversarial_workload(net: ActivityNetwork, triple: tuple[int, int, int],
                         eps: Fraction) -> Workload:
    """Unit duration on the triple, eps on everything else.

    With eps <= 1, any extension in which the triple is a chain slows down
    by at least 3/(1 + (depth-1)*eps): a chain of net carries at most one
    triple member, while the forced chain weighs at least 3.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if not is_antichain(net, triple):
        raise NotAntichain(f"activities {triple} are not pairwise incomparable")
    durations = [eps] * net.n
    for a in triple:
        durations[a] = Fraction(1)
    return Workload(tuple(durations))


def adversarial_bound(net: ActivityNetwork, eps: Fraction) -> Fraction:
    return Fraction(3) / (1 + (depth(net) - 1) * Fraction(eps))


def adversary_report(base: ActivityNetwork, ext: ActivityNetwork,
                     eps: Fraction = Fraction(1, 10)) -> SlowdownReport:
    """Find a forced triple and measure the adversarial slowdown of ext."""
    if not is_series_parallel(ext):
        raise NotSeriesParallel("extension is not series-parallel")
    triple = find_forced_chain_triple(base, ext)
    if triple is None:
        raise TripleNotFound(
            "no antichain-to-chain triple: this extension would refute the "
            "forced-triple construction and must be investigated")
    t = adversarial_workload(base, triple, eps)
    return extension_report(base, ext, t)


def disprove_factor_two(ext: ActivityNetwork,
                        eps: Fraction = Fraction(1, 10)) -> SlowdownReport:
    """Adversarial report against ns(3,8,3); slowdown is at least
    3/(1+2*eps), i.e. 5/2 at the default eps of 1/10, beating factor 2."""
    base = ns_network(NsSpec(3, 8, 3))
    return adversary_report(base, ext, eps)
