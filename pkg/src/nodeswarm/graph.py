"""Graph data model and the natural-language edge-list parser.

Problems arrive as plain text: a node-count or node-range clause followed
by parenthesized edge tuples, e.g.

    The graph has 8 nodes, and the edges are: (0,7,9) (0,1,7) ... (5,7,6).

Graphs are immutable after construction and safe to share across threads.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import Mapping

from .errors import (
    EndpointOutOfRangeError,
    MalformedTupleError,
    MissingNodeClauseError,
    UnknownNodeError,
)


class DuplicateEdgeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    weight: int | float | None = None
    feature: str | None = None


@dataclass(frozen=True)
class Graph:
    """Parsed node/edge structure. Node ids are kept exactly as written."""

    node_count: int
    node_ids: tuple[int, ...]
    edges: tuple[Edge, ...]
    directed: bool
    weighted: bool
    node_features: Mapping[int, str] | None = None
    _adj: dict = field(default=None, compare=False, repr=False)
    _in_adj: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        nodes = set(self.node_ids)
        if len(nodes) != self.node_count:
            raise ValueError("node_count does not match node_ids")
        adj: dict[int, list[tuple[int, int | float | None]]] = {v: [] for v in self.node_ids}
        in_adj: dict[int, list[tuple[int, int | float | None]]] = {v: [] for v in self.node_ids}
        for e in self.edges:
            if e.src not in nodes or e.dst not in nodes:
                raise EndpointOutOfRangeError(f"edge ({e.src},{e.dst}) references an undeclared node")
            if self.weighted and e.weight is None:
                raise ValueError(f"weighted graph has unweighted edge ({e.src},{e.dst})")
            if not self.weighted and e.weight is not None:
                raise ValueError(f"unweighted graph has weighted edge ({e.src},{e.dst})")
            adj[e.src].append((e.dst, e.weight))
            in_adj[e.dst].append((e.src, e.weight))
            if not self.directed and e.src != e.dst:
                adj[e.dst].append((e.src, e.weight))
                in_adj[e.src].append((e.dst, e.weight))
        object.__setattr__(self, "_adj", {v: tuple(sorted(lst)) for v, lst in adj.items()})
        if self.directed:
            object.__setattr__(self, "_in_adj", {v: tuple(sorted(lst)) for v, lst in in_adj.items()})
        else:
            object.__setattr__(self, "_in_adj", self._adj)

    def has_node(self, v: int) -> bool:
        return v in self._adj

    def neighbors(self, v: int) -> tuple[tuple[int, int | float | None], ...]:
        """(neighbor, weight) pairs; out-neighbors for directed graphs."""
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownNodeError(f"node {v} is not in the graph") from None

    def in_neighbors(self, v: int) -> tuple[tuple[int, int | float | None], ...]:
        try:
            return self._in_adj[v]
        except KeyError:
            raise UnknownNodeError(f"node {v} is not in the graph") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def feature_of(self, v: int) -> str | None:
        if self.node_features is None:
            return None
        return self.node_features.get(v)

    def serialize(self) -> str:
        """Canonical one-line form: node clause, then tuples in input order."""
        lo, hi = min(self.node_ids), max(self.node_ids)
        parts = [f"The nodes are numbered from {lo} to {hi}, and the edges are:"]
        for e in self.edges:
            if self.weighted:
                parts.append(f"({e.src}, {e.dst}, {e.weight})")
            else:
                parts.append(f"({e.src}, {e.dst})")
        text = " ".join(parts)
        if self.node_features:
            clauses = " ".join(
                f"The weight of node {v} is {self.node_features[v]}."
                for v in sorted(self.node_features)
            )
            text = f"{text} {clauses}"
        return text


_COUNT_RE = re.compile(r"the\s+graph\s+has\s+(\d+)\s+nodes", re.IGNORECASE)
_RANGE_RE = re.compile(r"nodes\s+are\s+numbered\s+from\s+(\d+)\s+to\s+(\d+)", re.IGNORECASE)
_EDGES_MARKER_RE = re.compile(r"edges\s+(?:are\s*)?:", re.IGNORECASE)
_TUPLE_RE = re.compile(r"\s*,?\s*\(([^()]*)\)")
_NODE_WEIGHT_RE = re.compile(r"the\s+weight\s+of\s+node\s+(\d+)\s+is\s+(-?\d+(?:\.\d+)?)", re.IGNORECASE)


def parse_graph(description: str, directed: bool, weighted: bool) -> Graph:
    """Parse a natural-language edge-list problem description.

    Tuple arity must match ``weighted``: 2-tuples for unweighted graphs,
    3-tuples for weighted ones. Duplicate edges are dropped with a
    DuplicateEdgeWarning; self-loops are kept.
    """
    range_match = _RANGE_RE.search(description)
    if range_match:
        lo, hi = int(range_match.group(1)), int(range_match.group(2))
        if hi < lo:
            raise MissingNodeClauseError(f"empty node range {lo}..{hi}")
        node_ids = tuple(range(lo, hi + 1))
    else:
        count_match = _COUNT_RE.search(description)
        if not count_match:
            raise MissingNodeClauseError("no node-count or node-range clause found")
        node_ids = tuple(range(int(count_match.group(1))))
    node_set = set(node_ids)

    edges: list[Edge] = []
    marker = _EDGES_MARKER_RE.search(description)
    if marker:
        tail = description[marker.end():]
        pos = 0
        seen: set[tuple[int, int]] = set()
        while True:
            m = _TUPLE_RE.match(tail, pos)
            if not m:
                break
            pos = m.end()
            edge = _parse_tuple(m.group(1), weighted)
            if edge.src not in node_set or edge.dst not in node_set:
                raise EndpointOutOfRangeError(
                    f"edge ({edge.src},{edge.dst}) references a node outside the declared range"
                )
            key = (edge.src, edge.dst)
            if not directed and edge.src > edge.dst:
                key = (edge.dst, edge.src)
            if key in seen:
                warnings.warn(f"duplicate edge ({edge.src},{edge.dst}) dropped", DuplicateEdgeWarning)
                continue
            seen.add(key)
            edges.append(edge)

    features = {int(v): w for v, w in _NODE_WEIGHT_RE.findall(description)}

    return Graph(
        node_count=len(node_ids),
        node_ids=node_ids,
        edges=tuple(edges),
        directed=directed,
        weighted=weighted,
        node_features=features or None,
    )


def _parse_tuple(body: str, weighted: bool) -> Edge:
    parts = [p.strip() for p in body.split(",")]
    want = 3 if weighted else 2
    if len(parts) != want:
        raise MalformedTupleError(
            f"tuple ({body}) has {len(parts)} entries, expected {want}"
        )
    try:
        src, dst = int(parts[0]), int(parts[1])
    except ValueError:
        raise MalformedTupleError(f"tuple ({body}) has a non-integer endpoint") from None
    if src < 0 or dst < 0:
        raise MalformedTupleError(f"tuple ({body}) has a negative node id")
    weight = None
    if weighted:
        weight = _parse_weight(parts[2], body)
    return Edge(src=src, dst=dst, weight=weight)


def _parse_weight(text: str, body: str):
    # integer-formed weights stay exact integers
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise MalformedTupleError(f"tuple ({body}) has a non-numeric weight") from None
