"""Exhaustive verification of the 4/3 slowdown conjecture for small n.

Pipeline: enumerate all n-activity networks up to isomorphism, keep the
non-series-parallel ones that cannot be reduced through series or parallel
modules (one representative per dual pair), and for each assume it is a
counterexample.  That assumption forces, for every minimal SP extension H
and choice of critical chain C in H, the strict system

    q*T(C) > p*T(B)   for every maximal chain B of the candidate,
    T(C)  >= T(D)     for every other maximal chain D of H,

with p/q the bound, plus T(C) > T(B) for minimal decomposable extensions
and strict positivity of every duration.  The candidate is refuted when
every choice of critical chains is infeasible; a feasible witness is
re-verified against brute-force enumeration of all SP extensions before it
is ever reported.
"""

from __future__ import annotations

import json
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Callable, Iterator, Sequence

from .errors import SizeLimitExceeded
from .extensions import (all_sp_extensions, minimal_sp_extensions,
                         _minimal_targets, resolve_limit)
from .feasibility import Inequality, InequalitySystem, fm_feasible
from .network import (ActivityNetwork, Workload, canonical_form, dual,
                      from_closure, makespan, maximal_chains,
                      network_from_canonical)
from .serialize import format_rational, network_to_doc
from .spalgebra import (Classification, classify, is_fully_indecomposable,
                        is_series_parallel)

DEFAULT_POSET_LIMIT = 7
DEFAULT_BOUND = Fraction(4, 3)


# ---------------------------------------------------------------------------
# Enumeration up to isomorphism

def _down_closed_subsets(k: int, pred: list[int]) -> Iterator[int]:
    for mask in range(1 << k):
        ok = True
        rest = mask
        while rest:
            low = rest & -rest
            if pred[low.bit_length() - 1] & ~mask:
                ok = False
                break
            rest ^= low
        if ok:
            yield mask


def enumerate_posets(n: int, limit: int | None = None) -> list[ActivityNetwork]:
    """All transitively closed DAGs on n activities, one per isomorphism
    class, ordered by canonical key.

    Generation adds one maximal vertex at a time, choosing any down-closed
    predecessor set, which yields exactly the naturally labeled posets;
    canonical forms then collapse isomorphic duplicates.
    """
    cap = resolve_limit(limit, DEFAULT_POSET_LIMIT)
    if n > cap:
        raise SizeLimitExceeded(f"poset enumeration capped at n={cap}")
    keys: set[tuple[int, ...]] = set()

    def rec(k: int, succ: list[int], pred: list[int]):
        if k == n:
            keys.add(canonical_form(from_closure(n, succ)))
            return
        for ideal in _down_closed_subsets(k, pred):
            nsucc = [succ[i] | (1 << k) if ideal >> i & 1 else succ[i]
                     for i in range(k)]
            nsucc.append(0)
            pred.append(ideal)
            rec(k + 1, nsucc, pred)
            pred.pop()

    rec(0, [], [])
    return [network_from_canonical(key) for key in sorted(keys)]


def dual_dedup(nets: Sequence[ActivityNetwork]) -> list[ActivityNetwork]:
    """One representative per {network, dual} pair (first in given order)."""
    seen: set[tuple[int, ...]] = set()
    out = []
    for g in nets:
        key = min(canonical_form(g), canonical_form(dual(g)))
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


def candidate_networks(n: int, limit: int | None = None) -> list[ActivityNetwork]:
    """Non-SP classes that decompose through no series or parallel module,
    deduplicated against their duals.

    Networks with a series or parallel module reduce to strictly smaller
    instances, so these are the only candidates an inductive bound check
    must examine.
    """
    non_sp = [g for g in enumerate_posets(n, limit)
              if not is_series_parallel(g)]
    return [g for g in dual_dedup(non_sp) if is_fully_indecomposable(g)]


# ---------------------------------------------------------------------------
# Inequality systems

@dataclass(frozen=True)
class ExtensionRecord:
    net: ActivityNetwork
    chains: tuple[tuple[int, ...], ...]
    sp: bool
    decomposable: bool


def _chain_coeffs(n: int, chain: Sequence[int], scale: int = 1) -> list[int]:
    vec = [0] * n
    for i in chain:
        vec[i] = scale
    return vec


def _positivity(n: int) -> list[Inequality]:
    return [Inequality(tuple(1 if j == i else 0 for j in range(n)), True,
                       f"t({i}) > 0")
            for i in range(n)]


def _proper_minimal_decomposable(net: ActivityNetwork,
                                 limit: int | None) -> list[ActivityNetwork]:
    def decomposable(succ: tuple[int, ...]) -> bool:
        return classify(from_closure(len(succ), succ)) is not \
            Classification.INDECOMPOSABLE

    return _minimal_targets(net, decomposable, include_self=False)


def extension_records(net: ActivityNetwork,
                      limit: int | None = None) -> list[ExtensionRecord]:
    """Minimal SP and minimal proper decomposable extensions, merged by
    closure, ordered fewest-critical-chain-choices first."""
    kinds: dict[tuple[int, ...], list[bool]] = {}
    for h in minimal_sp_extensions(net, limit):
        kinds.setdefault(h.succ, [False, False])[0] = True
    for h in _proper_minimal_decomposable(net, limit):
        kinds.setdefault(h.succ, [False, False])[1] = True
    records = []
    for succ, (sp, dec) in kinds.items():
        h = from_closure(net.n, succ, net.labels)
        records.append(ExtensionRecord(h, tuple(maximal_chains(h)), sp, dec))
    records.sort(key=lambda r: (len(r.chains), not r.sp, r.net.succ))
    return records


def _choice_rows(base_chains: Sequence[tuple[int, ...]],
                 record: ExtensionRecord, choice: int, n: int,
                 bound: Fraction, tag: str) -> list[Inequality]:
    p, q = bound.numerator, bound.denominator
    critical = record.chains[choice]
    cname = "".join(map(str, critical))
    cvec = _chain_coeffs(n, critical)
    rows = []

    def push(coeffs: tuple[int, ...], strict: bool, prov: str) -> None:
        # Rows with no negative coefficient and some positive one are
        # implied by the positivity rows every system carries.
        if any(c < 0 for c in coeffs) or not any(coeffs):
            rows.append(Inequality(coeffs, strict, prov))

    for b in base_chains:
        bname = "".join(map(str, b))
        bvec = _chain_coeffs(n, b)
        if record.sp:
            push(tuple(q * cvec[k] - p * bvec[k] for k in range(n)), True,
                 f"{tag}: {q}T({cname}) > {p}T({bname})")
        if record.decomposable:
            push(tuple(cvec[k] - bvec[k] for k in range(n)), True,
                 f"{tag}: T({cname}) > T({bname})")
    for d in record.chains:
        if d == critical:
            continue
        dvec = _chain_coeffs(n, d)
        dname = "".join(map(str, d))
        push(tuple(cvec[k] - dvec[k] for k in range(n)), False,
             f"{tag}: T({cname}) >= T({dname})")
    return rows


def build_systems(net: ActivityNetwork, bound: Fraction = DEFAULT_BOUND,
                  records: Sequence[ExtensionRecord] | None = None,
                  limit: int | None = None) -> Iterator[InequalitySystem]:
    """Lazily yield one complete system per choice of critical chains.

    Each system asserts that every listed extension exceeds the bound (SP)
    or the base makespan (decomposable) with the chosen chain critical.
    """
    if records is None:
        records = extension_records(net, limit)
    base_chains = maximal_chains(net)
    positivity = _positivity(net.n)

    def emit(k: int, rows: list[Inequality], tags: list[str]
             ) -> Iterator[InequalitySystem]:
        if k == len(records):
            yield InequalitySystem(net.n, tuple(rows), label=",".join(tags))
            return
        rec = records[k]
        for choice in range(len(rec.chains)):
            extra = _choice_rows(base_chains, rec, choice, net.n, bound,
                                 f"ext{k}")
            cname = "".join(map(str, rec.chains[choice]))
            yield from emit(k + 1, rows + extra, tags + [f"ext{k}={cname}"])

    yield from emit(0, list(positivity), [])


@dataclass(frozen=True)
class CandidateResult:
    index: int
    network: ActivityNetwork
    sp_extensions: int
    decomposable_extensions: int
    systems_total: int
    verdict: str  # "infeasible" or "counterexample"
    witness: tuple[Fraction, ...] | None

    def to_jsonable(self) -> dict:
        return {
            "index": self.index,
            "network": network_to_doc(self.network),
            "sp_extensions": self.sp_extensions,
            "decomposable_extensions": self.decomposable_extensions,
            "systems": self.systems_total,
            "verdict": self.verdict,
            "witness": (None if self.witness is None
                        else [format_rational(w) for w in self.witness]),
        }


def _chain_weight(chains: Sequence[tuple[int, ...]],
                  point: Sequence[Fraction]) -> Fraction:
    return max(sum((point[i] for i in chain), Fraction(0)) for chain in chains)


def _implies(a: Inequality, b: Inequality) -> bool:
    """Whether row a makes row b redundant on the positive orthant.

    Sound only because every system here carries all positivity rows:
    coefficientwise b >= a gives b.x >= a.x at positive points.
    """
    if not a.strict and b.strict:
        return False
    return all(bc >= ac for ac, bc in zip(a.coeffs, b.coeffs))


def _merge_rows(base: list[Inequality], extra: list[Inequality],
                protected: int) -> list[Inequality]:
    """Append rows, dropping any row dominated by another; the first
    `protected` rows (the positivity block) are never removed."""
    rows = list(base)
    for r in extra:
        if any(_implies(k, r) for k in rows):
            continue
        rows = rows[:protected] + \
            [k for k in rows[protected:] if not _implies(r, k)] + [r]
    return rows


def check_candidate(net: ActivityNetwork, bound: Fraction = DEFAULT_BOUND,
                    limit: int | None = None, index: int = 0) -> CandidateResult:
    """Refute one candidate, or produce a brute-force-verified witness.

    Witness-guided refinement over the critical-chain cross product: solve
    the rows gathered so far, evaluate the actual extension makespans at
    the resulting point, and branch only over the chain choices of an
    extension whose bound the point fails to exceed.  A workload violating
    the bound everywhere survives every refinement (its own critical chains
    are among the branches), so refuting all branches refutes the
    candidate; conversely a point that beats the bound on every extension
    is a counterexample regardless of any remaining choices.
    """
    records = extension_records(net, limit)
    base_chains = maximal_chains(net)
    positivity = _positivity(net.n)
    total = prod(len(r.chains) for r in records)
    p, q = bound.numerator, bound.denominator

    def violated(point: Sequence[Fraction], open_recs: tuple[int, ...]) -> int | None:
        """Index of an open record whose makespan fails its constraint at
        the point; prefers the fewest-chain record (smallest branching)."""
        t_base = _chain_weight(base_chains, point)
        worst = None
        for k in open_recs:
            rec = records[k]
            t_ext = _chain_weight(rec.chains, point)
            bad = (rec.sp and q * t_ext <= p * t_base) or \
                  (rec.decomposable and t_ext <= t_base)
            if bad and (worst is None
                        or len(rec.chains) < len(records[worst].chains)):
                worst = k
        return worst

    def refine(rows: list[Inequality], open_recs: tuple[int, ...]
               ) -> tuple[Fraction, ...] | None:
        res = fm_feasible(InequalitySystem(net.n, tuple(rows)))
        if not res.feasible:
            return None
        point = res.witness
        k = violated(point, open_recs)
        if k is None:
            return point
        rec = records[k]
        rest = tuple(i for i in open_recs if i != k)
        for choice in range(len(rec.chains)):
            extra = _choice_rows(base_chains, rec, choice, net.n, bound,
                                 f"ext{k}")
            found = refine(_merge_rows(rows, extra, net.n), rest)
            if found is not None:
                return found
        return None

    witness = refine(list(positivity), tuple(range(len(records))))
    if witness is None:
        return CandidateResult(index, net, sum(r.sp for r in records),
                               sum(r.decomposable for r in records), total,
                               "infeasible", None)
    workload = Workload(witness)
    if not verify_counterexample(net, workload, bound, limit):
        raise AssertionError(
            "feasible witness failed brute-force verification: "
            f"network={net.closure_pairs()} witness={witness} bound={bound}")
    return CandidateResult(index, net, sum(r.sp for r in records),
                           sum(r.decomposable for r in records), total,
                           "counterexample", witness)


def verify_counterexample(net: ActivityNetwork, t: Workload,
                          bound: Fraction, limit: int | None = None) -> bool:
    """True iff the minimum slowdown over ALL SP extensions exceeds bound.

    Brute-force over the whole closure lattice; intentionally independent
    of the elimination path so it can vouch for its witnesses.
    """
    base = makespan(net, t)
    best = min(makespan(h, t) for h in all_sp_extensions(net, limit))
    return best * bound.denominator > bound.numerator * base


# ---------------------------------------------------------------------------
# Whole-n sweep with checkpointing

@dataclass(frozen=True)
class CheckReport:
    n: int
    bound: Fraction
    total_classes: int
    non_sp_classes: int
    non_sp_after_dual_dedup: int
    candidates: tuple[CandidateResult, ...]
    elapsed_seconds: float

    @property
    def counterexample_found(self) -> bool:
        return any(c.verdict == "counterexample" for c in self.candidates)

    def to_jsonable(self, include_timing: bool = False) -> dict:
        doc = {
            "n": self.n,
            "bound": format_rational(self.bound),
            "classes": self.total_classes,
            "non_sp_classes": self.non_sp_classes,
            "non_sp_after_dual_dedup": self.non_sp_after_dual_dedup,
            "candidates_examined": len(self.candidates),
            "counterexample_found": self.counterexample_found,
            "candidates": [c.to_jsonable() for c in self.candidates],
        }
        if include_timing:
            doc["elapsed_seconds"] = self.elapsed_seconds
        return doc


def _candidate_key(net: ActivityNetwork) -> str:
    return ".".join(map(str, canonical_form(net)))


def _worker(args: tuple[tuple[int, ...], str, int | None, int]) -> dict:
    succ, bound_str, limit, index = args
    net = from_closure(len(succ), succ)
    return check_candidate(net, Fraction(bound_str), limit, index).to_jsonable()


def _load_checkpoint(path: str, n: int, bound: Fraction) -> dict[str, dict]:
    if not path or not os.path.exists(path):
        return {}
    try:
        with open(path, encoding="utf-8") as fp:
            doc = json.load(fp)
    except (OSError, json.JSONDecodeError):
        return {}
    if (doc.get("checkpoint_version") != 1 or doc.get("n") != n
            or doc.get("bound") != format_rational(bound)):
        return {}
    return dict(doc.get("done", {}))


def _save_checkpoint(path: str, n: int, bound: Fraction,
                     done: dict[str, dict]) -> None:
    doc = {"checkpoint_version": 1, "n": n, "bound": format_rational(bound),
           "done": done}
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fp:
        json.dump(doc, fp)
    os.replace(tmp, path)


def check_conjecture(n: int, bound: Fraction = DEFAULT_BOUND,
                     jobs: int = 1, checkpoint_path: str | None = None,
                     limit: int | None = None,
                     log: Callable[[str], None] | None = None) -> CheckReport:
    """Run the full pipeline for n activities.

    Progress is checkpointed per candidate (keyed by canonical form) so an
    interrupted run resumes where it stopped; candidates may be checked in
    parallel, and the report order is canonical either way.
    """
    t0 = time.perf_counter()
    say = log or (lambda msg: None)
    classes = enumerate_posets(n, limit)
    non_sp = [g for g in classes if not is_series_parallel(g)]
    deduped = dual_dedup(non_sp)
    cands = [g for g in deduped if is_fully_indecomposable(g)]
    say(f"n={n}: {len(classes)} classes, {len(non_sp)} non-SP, "
        f"{len(deduped)} after dual dedup, {len(cands)} candidates")

    done = _load_checkpoint(checkpoint_path, n, bound) if checkpoint_path else {}
    keys = [_candidate_key(g) for g in cands]
    results: dict[int, CandidateResult] = {}
    pending: list[int] = []
    for idx, key in enumerate(keys):
        if key in done:
            results[idx] = _result_from_jsonable(done[key], index=idx)
            say(f"candidate {idx + 1}/{len(cands)}: resumed "
                f"({results[idx].verdict})")
        else:
            pending.append(idx)

    def record(idx: int, payload: dict) -> None:
        results[idx] = _result_from_jsonable(payload, index=idx)
        done[keys[idx]] = payload
        if checkpoint_path:
            _save_checkpoint(checkpoint_path, n, bound, done)
        r = results[idx]
        say(f"candidate {idx + 1}/{len(cands)}: {r.verdict} "
            f"({r.sp_extensions} sp / {r.decomposable_extensions} dec "
            f"extensions, {r.systems_total} systems)")

    if jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {
                pool.submit(_worker, (cands[i].succ, format_rational(bound),
                                      limit, i)): i
                for i in pending}
            for fut in as_completed(futures):
                record(futures[fut], fut.result())
    else:
        for i in pending:
            record(i, check_candidate(cands[i], bound, limit, i).to_jsonable())

    ordered = tuple(results[i] for i in range(len(cands)))
    return CheckReport(n, bound, len(classes), len(non_sp), len(deduped),
                       ordered, time.perf_counter() - t0)


def _result_from_jsonable(doc: dict, index: int) -> CandidateResult:
    from .serialize import network_from_doc, parse_rational
    net, _ = network_from_doc(doc["network"])
    witness = doc.get("witness")
    return CandidateResult(
        index, net, doc["sp_extensions"], doc["decomposable_extensions"],
        doc["systems"], doc["verdict"],
        None if witness is None else tuple(parse_rational(w) for w in witness))
