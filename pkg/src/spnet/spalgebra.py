"""Series-parallel structure: expressions, recognition, decomposition.

SP expressions are symbolic trees over activity *names*; networks convert
to and from them through their labels.  Recognition is by scanning for the
forbidden 4-activity N pattern; decomposition splits on comparability /
incomparability components; modular decomposition adds the indecomposable
case via maximal-module refinement.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterator, Mapping, Sequence, Union

from .errors import (DuplicateActivity, ExpressionSyntaxError,
                     NotSeriesParallel, OverlappingActivities)
from .network import ActivityNetwork, _bits, from_closure, from_edges


# ---------------------------------------------------------------------------
# SP expressions

@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Series:
    parts: tuple["SpExpr", ...]


@dataclass(frozen=True)
class Parallel:
    parts: tuple["SpExpr", ...]


SpExpr = Union[Atom, Series, Parallel]


def atom_names(e: SpExpr) -> list[str]:
    """Atom names in expression order."""
    if isinstance(e, Atom):
        return [e.name]
    out: list[str] = []
    for p in e.parts:
        out.extend(atom_names(p))
    return out


def _min_atom(e: SpExpr) -> str:
    return min(atom_names(e))


def series(parts: Sequence[SpExpr]) -> SpExpr:
    """Series combination; nested series are flattened."""
    flat: list[SpExpr] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Series) else [p])
    if not flat:
        raise ValueError("empty series")
    return flat[0] if len(flat) == 1 else Series(tuple(flat))


def parallel(parts: Sequence[SpExpr]) -> SpExpr:
    """Parallel combination; flattened and sorted by smallest atom name."""
    flat: list[SpExpr] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Parallel) else [p])
    if not flat:
        raise ValueError("empty parallel")
    if len(flat) == 1:
        return flat[0]
    return Parallel(tuple(sorted(flat, key=_min_atom)))


def _check_unique_atoms(e: SpExpr) -> None:
    names = atom_names(e)
    if len(names) != len(set(names)):
        seen = set()
        for name in names:
            if name in seen:
                raise DuplicateActivity(f"activity {name!r} appears twice")
            seen.add(name)


def render_sp_expr(e: SpExpr) -> str:
    """Canonical text: series as juxtaposition, parallel parenthesized."""
    if isinstance(e, Atom):
        if len(e.name) == 1 and e.name.isalnum():
            return e.name
        return f"[{e.name}]"
    if isinstance(e, Series):
        return "".join(render_sp_expr(p) for p in e.parts)
    return "(" + "+".join(render_sp_expr(p) for p in e.parts) + ")"


def parse_sp_expr(text: str) -> SpExpr:
    """Parse expression text.

    Atoms are single alphanumeric characters, or arbitrary names in square
    brackets.  Series is juxtaposition or '.', parallel is '+' inside
    parentheses.  Whitespace is ignored.
    """
    tokens = list(_tokenize(text))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_seq() -> SpExpr:
        parts = [parse_term()]
        while True:
            tok = peek()
            if tok == ".":
                take()
                parts.append(parse_term())
            elif tok == "(" or (tok is not None and tok not in ")+."):
                parts.append(parse_term())
            else:
                break
        return series(parts)

    def parse_term() -> SpExpr:
        tok = peek()
        if tok is None:
            raise ExpressionSyntaxError("unexpected end of expression")
        if tok == "(":
            take()
            branches = [parse_seq()]
            while peek() == "+":
                take()
                branches.append(parse_seq())
            if peek() != ")":
                raise ExpressionSyntaxError("expected ')'")
            take()
            return parallel(branches) if len(branches) > 1 else branches[0]
        if tok in ")+.":
            raise ExpressionSyntaxError(f"unexpected {tok!r}")
        take()
        return Atom(tok)

    expr = parse_seq()
    if pos != len(tokens):
        raise ExpressionSyntaxError(f"trailing input at token {tokens[pos]!r}")
    _check_unique_atoms(expr)
    return expr


def _tokenize(text: str) -> Iterator[str]:
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()+.":
            yield ch
            i += 1
        elif ch == "[":
            end = text.find("]", i)
            if end < 0:
                raise ExpressionSyntaxError("unterminated '[' atom")
            if end == i + 1:
                raise ExpressionSyntaxError("empty '[]' atom")
            yield text[i + 1:end]
            i = end + 1
        elif ch.isalnum():
            yield ch
            i += 1
        else:
            raise ExpressionSyntaxError(f"unexpected character {ch!r}")


def expr_to_network(e: SpExpr) -> ActivityNetwork:
    """Build the network an expression denotes; ids follow sorted atom names."""
    _check_unique_atoms(e)
    names = sorted(atom_names(e))
    index = {name: i for i, name in enumerate(names)}
    edges: list[tuple[int, int]] = []

    def members(node: SpExpr) -> list[int]:
        if isinstance(node, Atom):
            return [index[node.name]]
        groups = [members(p) for p in node.parts]
        if isinstance(node, Series):
            for k in range(len(groups)):
                for m in range(k + 1, len(groups)):
                    edges.extend((x, y) for x in groups[k] for y in groups[m])
        return [x for g in groups for x in g]

    members(e)
    return from_edges(len(names), edges, labels=names)


def expr_makespan(e: SpExpr, durations: Mapping[str, object]) -> Fraction:
    """Max-plus evaluation: parallel is max, series is sum of durations."""
    if isinstance(e, Atom):
        return Fraction(durations[e.name])  # type: ignore[arg-type]
    vals = [expr_makespan(p, durations) for p in e.parts]
    return sum(vals, Fraction(0)) if isinstance(e, Series) else max(vals)


def durations_by_name(net: ActivityNetwork, t) -> dict[str, Fraction]:
    """Bridge an id-indexed workload to the label names of the network."""
    return {net.label(i): t[i] for i in range(net.n)}


# ---------------------------------------------------------------------------
# Composition of whole networks

def _compose(g1: ActivityNetwork, g2: ActivityNetwork,
             cross: bool) -> ActivityNetwork:
    labels = None
    if g1.labels is not None and g2.labels is not None:
        clash = set(g1.labels) & set(g2.labels)
        if clash:
            raise OverlappingActivities(f"shared labels: {sorted(clash)}")
        labels = g1.labels + g2.labels
    n = g1.n + g2.n
    hi = ((1 << g2.n) - 1) << g1.n
    succ = [g1.succ[i] | (hi if cross else 0) for i in range(g1.n)]
    succ += [g2.succ[j] << g1.n for j in range(g2.n)]
    return from_closure(n, succ, labels)


def series_compose(g1: ActivityNetwork, g2: ActivityNetwork) -> ActivityNetwork:
    """Every activity of g1 precedes every activity of g2."""
    return _compose(g1, g2, cross=True)


def parallel_compose(g1: ActivityNetwork, g2: ActivityNetwork) -> ActivityNetwork:
    """Disjoint union with no cross constraints."""
    return _compose(g1, g2, cross=False)


# ---------------------------------------------------------------------------
# Recognition

def find_n_witness(net: ActivityNetwork) -> tuple[int, int, int, int] | None:
    """First (a,b,c,d) with a<c, a<d, b<d and no other comparabilities.

    Returns the lexicographically smallest such role tuple, or None when
    the network is N-free (hence series-parallel).
    """
    succ, pred = net.succ, net.pred
    for a in range(net.n):
        sa = succ[a]
        if not sa:
            continue
        for b in range(net.n):
            if b == a or (succ[a] >> b | succ[b] >> a) & 1:
                continue
            d_set = sa & succ[b]
            if not d_set:
                continue
            c_set = sa & ~(succ[b] | pred[b]) & ~(1 << b)
            for c in _bits(c_set):
                dc = d_set & ~(succ[c] | pred[c]) & ~(1 << c)
                if dc:
                    d = (dc & -dc).bit_length() - 1
                    return (a, b, c, d)
    return None


def is_series_parallel(net: ActivityNetwork) -> bool:
    return find_n_witness(net) is None


# ---------------------------------------------------------------------------
# SP decomposition

def _mask_components(members: int, adj: Sequence[int]) -> list[int]:
    """Connected components (as masks) of the graph adj restricted to members."""
    comps = []
    rest = members
    while rest:
        seed = rest & -rest
        comp = 0
        frontier = seed
        while frontier:
            comp |= frontier
            new = 0
            for v in _bits(frontier):
                new |= adj[v] & members
            frontier = new & ~comp
        comps.append(comp)
        rest &= ~comp
    return comps


def sp_decompose(net: ActivityNetwork) -> SpExpr:
    """An SP expression rebuilding the network; NotSeriesParallel otherwise."""
    comp_adj = [net.succ[i] | net.pred[i] for i in range(net.n)]
    inc_adj = [~comp_adj[i] & ~(1 << i) for i in range(net.n)]

    def rec(members: int) -> SpExpr:
        if members & (members - 1) == 0:
            return Atom(net.label(members.bit_length() - 1))
        par = _mask_components(members, comp_adj)
        if len(par) > 1:
            return parallel([rec(m) for m in par])
        ser = _mask_components(members, inc_adj)
        if len(ser) > 1:
            def before(x: int, y: int) -> int:
                i = (x & -x).bit_length() - 1
                j = (y & -y).bit_length() - 1
                return -1 if net.precedes(i, j) else 1
            ser.sort(key=cmp_to_key(before))
            return series([rec(m) for m in ser])
        raise NotSeriesParallel(
            f"activities {[net.label(i) for i in _bits(members)]} "
            "split neither in series nor in parallel")

    if net.n == 0:
        raise ValueError("empty network has no expression")
    return rec((1 << net.n) - 1)


# ---------------------------------------------------------------------------
# Modular decomposition

@dataclass(frozen=True)
class Leaf:
    activity: int


@dataclass(frozen=True)
class SeriesNode:
    children: tuple["DecompositionTree", ...]


@dataclass(frozen=True)
class ParallelNode:
    children: tuple["DecompositionTree", ...]


@dataclass(frozen=True)
class IndecomposableNode:
    quotient: ActivityNetwork
    children: tuple["DecompositionTree", ...]


DecompositionTree = Union[Leaf, SeriesNode, ParallelNode, IndecomposableNode]


def tree_leaves(tree: DecompositionTree) -> list[int]:
    if isinstance(tree, Leaf):
        return [tree.activity]
    out: list[int] = []
    for c in tree.children:
        out.extend(tree_leaves(c))
    return out


def _min_leaf(tree: DecompositionTree) -> int:
    return min(tree_leaves(tree))


def _minimal_module(net: ActivityNetwork, start: int, members: int) -> int:
    """Smallest module within `members` containing the `start` set.

    Grown by absorbing every outside activity whose relation to the set is
    not uniform (same predecessor/successor/incomparable status to all).
    """
    mod = start
    changed = True
    while changed:
        changed = False
        for z in _bits(members & ~mod):
            below = net.succ[z] & mod
            above = net.pred[z] & mod
            if (below and below != mod) or (above and above != mod):
                mod |= 1 << z
                changed = True
    return mod


def modular_decomposition(net: ActivityNetwork) -> DecompositionTree:
    """Maximal-module tree with Series, Parallel and Indecomposable nodes."""
    comp_adj = [net.succ[i] | net.pred[i] for i in range(net.n)]
    inc_adj = [~comp_adj[i] & ~(1 << i) for i in range(net.n)]

    def rec(members: int) -> DecompositionTree:
        if members & (members - 1) == 0:
            return Leaf(members.bit_length() - 1)
        par = _mask_components(members, comp_adj)
        if len(par) > 1:
            kids = sorted((rec(m) for m in par), key=_min_leaf)
            return ParallelNode(tuple(kids))
        ser = _mask_components(members, inc_adj)
        if len(ser) > 1:
            def before(x: int, y: int) -> int:
                i = (x & -x).bit_length() - 1
                j = (y & -y).bit_length() - 1
                return -1 if net.precedes(i, j) else 1
            ser.sort(key=cmp_to_key(before))
            return SeriesNode(tuple(rec(m) for m in ser))
        # Both graphs connected: maximal proper modules partition members.
        blocks: list[int] = []
        rest = members
        while rest:
            x = rest & -rest
            block = x
            grown = True
            while grown:
                grown = False
                for y in _bits(members & ~block):
                    cand = _minimal_module(net, block | 1 << y, members)
                    if cand != members:
                        block = cand
                        grown = True
            blocks.append(block)
            rest &= ~block
        blocks.sort(key=lambda m: (m & -m).bit_length())
        reps = [(m & -m).bit_length() - 1 for m in blocks]
        q_edges = [(k, m) for k, rk in enumerate(reps)
                   for m, rm in enumerate(reps) if net.precedes(rk, rm)]
        quotient = from_edges(len(reps), q_edges,
                              labels=[net.label(r) for r in reps])
        return IndecomposableNode(quotient, tuple(rec(m) for m in blocks))

    if net.n == 0:
        raise ValueError("empty network has no decomposition")
    return rec((1 << net.n) - 1)


class Classification(str, enum.Enum):
    SP = "sp"
    DECOMPOSABLE_NON_SP = "decomposable"
    INDECOMPOSABLE = "indecomposable"


def _has_indecomposable(tree: DecompositionTree) -> bool:
    if isinstance(tree, Leaf):
        return False
    if isinstance(tree, IndecomposableNode):
        return True
    return any(_has_indecomposable(c) for c in tree.children)


def has_series_or_parallel(tree: DecompositionTree) -> bool:
    if isinstance(tree, Leaf):
        return False
    if isinstance(tree, (SeriesNode, ParallelNode)):
        return True
    return any(has_series_or_parallel(c) for c in tree.children)


def classify(net: ActivityNetwork) -> Classification:
    """SP, decomposable-but-not-SP, or indecomposable (prime)."""
    tree = modular_decomposition(net)
    if not _has_indecomposable(tree):
        return Classification.SP
    if isinstance(tree, IndecomposableNode) and all(
            isinstance(c, Leaf) for c in tree.children):
        return Classification.INDECOMPOSABLE
    return Classification.DECOMPOSABLE_NON_SP


def is_fully_indecomposable(net: ActivityNetwork) -> bool:
    """True when no series or parallel node occurs anywhere in the tree.

    These networks (indecomposable ones, and decomposable ones whose every
    module is itself indecomposable) are the only candidates that cannot be
    reduced to smaller networks when bounding slowdowns.
    """
    if net.n < 2:
        return False
    return not has_series_or_parallel(modular_decomposition(net))
