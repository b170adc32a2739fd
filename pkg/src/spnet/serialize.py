"""JSON network documents, exact rational text, and DOT export.

A network document is ``{"n": int, "labels": [str...], "edges":
[[i,j]...], "workload": ["p/q"...]}``; labels and workload are optional.
Edges may be any generating set; documents are emitted with the transitive
reduction so they round-trip canonically.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import IO, Any

from .errors import MalformedInputError
from .network import ActivityNetwork, Workload, from_edges, transitive_reduction


def parse_rational(value: Any) -> Fraction:
    """Exact rational from '3', '1/10', '2.5', or a JSON number."""
    try:
        if isinstance(value, bool):
            raise ValueError("booleans are not durations")
        if isinstance(value, (int, str)):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(str(value))
        if isinstance(value, Fraction):
            return value
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInputError(f"bad rational {value!r}: {exc}") from None
    raise MalformedInputError(f"bad rational {value!r}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def workload_to_doc(t: Workload) -> list[str]:
    return [format_rational(d) for d in t.durations]


def workload_from_doc(values: Any, n: int) -> Workload:
    if not isinstance(values, list) or len(values) != n:
        raise MalformedInputError(
            f"workload must list {n} durations, got {values!r}")
    durations = tuple(parse_rational(v) for v in values)
    if any(d <= 0 for d in durations):
        raise MalformedInputError("durations must be strictly positive")
    return Workload(durations)


def network_to_doc(net: ActivityNetwork,
                   workload: Workload | None = None) -> dict:
    doc: dict[str, Any] = {
        "n": net.n,
        "edges": [list(e) for e in transitive_reduction(net)],
    }
    if net.labels is not None:
        doc["labels"] = list(net.labels)
    if workload is not None:
        doc["workload"] = workload_to_doc(workload)
    return doc


def network_from_doc(doc: Any) -> tuple[ActivityNetwork, Workload | None]:
    if not isinstance(doc, dict):
        raise MalformedInputError("network document must be a JSON object")
    try:
        n = doc["n"]
    except KeyError:
        raise MalformedInputError("network document lacks 'n'") from None
    if not isinstance(n, int) or n < 0:
        raise MalformedInputError(f"'n' must be a nonnegative integer, got {n!r}")
    edges = doc.get("edges", [])
    if not isinstance(edges, list) or not all(
            isinstance(e, (list, tuple)) and len(e) == 2
            and all(isinstance(x, int) for x in e) for e in edges):
        raise MalformedInputError("'edges' must be a list of [int,int] pairs")
    labels = doc.get("labels")
    if labels is not None:
        if (not isinstance(labels, list) or len(labels) != n
                or not all(isinstance(x, str) for x in labels)):
            raise MalformedInputError(f"'labels' must list {n} strings")
    net = from_edges(n, [tuple(e) for e in edges], labels=labels)
    workload = None
    if doc.get("workload") is not None:
        workload = workload_from_doc(doc["workload"], n)
    return net, workload


def load_network(fp: IO[str]) -> tuple[ActivityNetwork, Workload | None]:
    try:
        doc = json.load(fp)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON: {exc}") from None
    return network_from_doc(doc)


def to_dot(net: ActivityNetwork, workload: Workload | None = None) -> str:
    """DOT digraph of the transitive reduction."""
    lines = ["digraph activity_network {"]
    for i in range(net.n):
        txt = net.label(i)
        if workload is not None:
            txt += f"\\n{format_rational(workload[i])}"
        lines.append(f'  n{i} [label="{txt}"];')
    for i, j in transitive_reduction(net):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
