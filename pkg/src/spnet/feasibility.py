"""Exact feasibility of homogeneous strict/non-strict linear inequalities.

Systems are decided by Fourier-Motzkin elimination over the rationals.
Combining a strict with a non-strict inequality yields a strict one; a
derived row with all-zero coefficients and a strict flag refutes the
system.  On success, back-substitution produces an exact rational witness,
which is re-checked against every original inequality before it is
returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence


@dataclass(frozen=True)
class Inequality:
    """coeffs . x > 0 (strict) or coeffs . x >= 0, over duration variables."""

    coeffs: tuple[int, ...]
    strict: bool
    provenance: str = ""

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.coeffs, values)), Fraction(0))

    def holds(self, values: Sequence[Fraction]) -> bool:
        lhs = self.evaluate(values)
        return lhs > 0 if self.strict else lhs >= 0

    def pretty(self, names: Sequence[str] | None = None) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                name = names[i] if names else f"x{i}"
                terms.append(f"{c:+d}*{name}")
        lhs = " ".join(terms) if terms else "0"
        return f"{lhs} {'>' if self.strict else '>='} 0"


@dataclass(frozen=True)
class InequalitySystem:
    n: int
    inequalities: tuple[Inequality, ...]
    label: str = ""

    def holds(self, values: Sequence[Fraction]) -> bool:
        return all(q.holds(values) for q in self.inequalities)


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: tuple[Fraction, ...] | None = None


def fm_feasible(system: InequalitySystem) -> FeasibilityResult:
    """Decide the system exactly; feasible results carry a verified witness.

    Runs the elimination with Kohler's history cutoff first.  Infeasibility
    found that way is always genuine (the contradiction is a valid
    combination of original rows), as is any witness that survives the
    final direct evaluation.  The cutoff can, however, discard rows it may
    not on degenerate (implicitly equality-constrained) systems, which
    surfaces as a failed witness construction; the elimination is then
    repeated exactly, with the cutoff disabled.
    """
    try:
        return _eliminate(system, accelerate=True)
    except _WitnessConstructionFailed:
        return _eliminate(system, accelerate=False)


class _WitnessConstructionFailed(Exception):
    pass


def _eliminate(system: InequalitySystem, accelerate: bool) -> FeasibilityResult:
    """Fourier-Motzkin elimination on the closed form of the system.

    Strictness tracking: because the system is homogeneous, any solution
    with coeffs.x > 0 scales to one with coeffs.x >= 1, so each strict row
    is carried as the closed row coeffs.x - 1 >= 0 and each non-strict row
    as coeffs.x >= 0.  Combining a strict with a non-strict row then yields
    a negative constant, i.e. a strict row, and a derived row with zero
    coefficients and negative constant is the contradiction 0 > 0.

    With accelerate, rows whose history exceeds eliminations+1 are dropped
    (after k eliminations an irredundant row of a full-dimensional system
    combines at most k+1 original rows).  Variables are eliminated
    fewest-occurrences-first, ties by index.  Every witness is re-checked
    against the original rows before being returned.
    """
    n = system.n
    # coeffs -> (constant, history of original row indices); a row means
    # coeffs.x + constant >= 0.
    rows: dict[tuple[int, ...], tuple[int, frozenset[int]]] = {}

    def add(coeffs: tuple[int, ...], const: int,
            history: frozenset[int]) -> bool:
        """Merge a row in; False signals a contradiction."""
        if not any(coeffs):
            return const >= 0
        g = 0
        for c in coeffs:
            g = gcd(g, abs(c))
        g = gcd(g, abs(const))
        if g > 1:
            coeffs = tuple(c // g for c in coeffs)
            const //= g
        old = rows.get(coeffs)
        if old is None or const < old[0]:
            rows[coeffs] = (const, history)
        return True

    for idx, q in enumerate(system.inequalities):
        if len(q.coeffs) != n:
            raise ValueError("inequality arity does not match the system")
        if not add(tuple(q.coeffs), -1 if q.strict else 0, frozenset((idx,))):
            return FeasibilityResult(False)

    # For back-substitution: per eliminated variable, the bounding rows of
    # the system it was eliminated from.
    trail: list[tuple[int, list[tuple[tuple[int, ...], int]]]] = []
    remaining = list(range(n))
    steps = 0

    while remaining:
        v = min(remaining,
                key=lambda i: (sum(1 for c in rows if c[i]), i))
        remaining.remove(v)
        steps += 1
        trail.append((v, [(c, k) for c, (k, _) in rows.items() if c[v]]))
        pos = [(c, rows[c]) for c in rows if c[v] > 0]
        neg = [(c, rows[c]) for c in rows if c[v] < 0]
        rows = {c: kh for c, kh in rows.items() if not c[v]}
        for pc, (pk, ph) in pos:
            for nc, (nk, nh) in neg:
                history = ph | nh
                if accelerate and len(history) > steps + 1:
                    continue
                a, b = pc[v], -nc[v]
                combo = tuple(b * pc[k] + a * nc[k] for k in range(n))
                if not add(combo, b * pk + a * nk, history):
                    return FeasibilityResult(False)

    # Feasible: rebuild a witness in reverse elimination order.  All rows
    # are closed here, so any point between the bounds works.
    values: list[Fraction | None] = [None] * n
    for v, bounding in reversed(trail):
        lo: Fraction | None = None
        hi: Fraction | None = None
        for coeffs, const in bounding:
            rest = sum((Fraction(coeffs[k]) * values[k]  # type: ignore[operator]
                        for k in range(n) if k != v and coeffs[k]),
                       Fraction(const))
            bound = -rest / coeffs[v]
            if coeffs[v] > 0:  # v >= bound
                if lo is None or bound > lo:
                    lo = bound
            else:  # v <= bound
                if hi is None or bound < hi:
                    hi = bound
        if lo is None and hi is None:
            values[v] = Fraction(1)
        elif hi is None:
            values[v] = lo + 1
        elif lo is None:
            values[v] = hi - 1
        elif lo <= hi:
            values[v] = (lo + hi) / 2
        elif accelerate:
            raise _WitnessConstructionFailed
        else:
            raise AssertionError(
                f"inconsistent bounds for variable {v}: elimination kept "
                "the system feasible but back-substitution disagrees")

    witness = tuple(v if v is not None else Fraction(1) for v in values)
    if not system.holds(witness):
        if accelerate:
            raise _WitnessConstructionFailed
        raise AssertionError(
            f"feasibility witness {witness} fails direct evaluation "
            f"of system {system.label!r}")
    return FeasibilityResult(True, witness)
