"""Deterministic problem-instance generators, one family per task.

Every instance is reproducible from (task, size, seed): the graph is an
Erdos-Renyi draw with expected degree between 2 and 6, weights are
integers in [1, 10], and the problem text follows each task's standard
phrasing. The oracle answer is computed at generation time.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Mapping

from ..errors import SizeOutOfRangeError
from ..graph import Edge, Graph
from ..orchestrator import Answer, Task
from . import oracles

NODE_RANGES: dict[Task, tuple[int, int]] = {
    Task.CYCLE: (2, 100),
    Task.CONNECTIVITY: (2, 100),
    Task.BIPARTITE: (2, 100),
    Task.TOPO_SORT: (2, 50),
    Task.SHORTEST_PATH: (2, 1000),
    Task.TRIANGLE_SUM: (2, 25),
    Task.MAX_FLOW: (2, 50),
    Task.PAGERANK: (2, 100),
    Task.HAMILTON: (2, 20),
}

# 100 nodes is the standard shortest-path maximum; larger sizes stay
# available for the large-scale sweep.
STANDARD_MAX = {Task.SHORTEST_PATH: 100}

WEIGHT_RANGE = (1, 10)
TARGET_DEGREE_RANGE = (2.0, 6.0)


@dataclass(frozen=True)
class InstanceSpec:
    task: Task
    size: int
    seed: int
    density: float
    rendered_text: str
    graph: Graph
    params: Mapping[str, Any]
    oracle_answer: Answer


def _rng(task: Task, size: int, seed: int) -> random.Random:
    return random.Random(f"{task.value}:{size}:{seed}")


def _edge_probability(rng: random.Random, n: int) -> float:
    if n < 2:
        return 0.0
    target = rng.uniform(*TARGET_DEGREE_RANGE)
    return min(1.0, target / (n - 1))


def _undirected_edges(rng: random.Random, nodes, p: float) -> list[tuple[int, int]]:
    edges = []
    ordered = list(nodes)
    for i, u in enumerate(ordered):
        for v in ordered[i + 1:]:
            if rng.random() < p:
                edges.append((u, v))
    return edges


def _directed_edges(rng: random.Random, nodes, p: float) -> list[tuple[int, int]]:
    edges = []
    for u in nodes:
        for v in nodes:
            if u != v and rng.random() < p:
                edges.append((u, v))
    return edges


def _weighted(rng: random.Random, pairs) -> list[tuple[int, int, int]]:
    return [(u, v, rng.randint(*WEIGHT_RANGE)) for u, v in pairs]


def _format_tuples(edges, weighted: bool) -> str:
    if weighted:
        return " ".join(f"({u}, {v}, {w})" for u, v, w in edges)
    return " ".join(f"({u}, {v})" for u, v in edges)


def _build_graph(nodes, edges, directed: bool, weighted: bool, features=None) -> Graph:
    if weighted:
        edge_objs = tuple(Edge(src=u, dst=v, weight=w) for u, v, w in edges)
    else:
        edge_objs = tuple(Edge(src=u, dst=v) for u, v in edges)
    return Graph(
        node_count=len(nodes),
        node_ids=tuple(nodes),
        edges=edge_objs,
        directed=directed,
        weighted=weighted,
        node_features=features,
    )


def generate_instance(task: Task, size: int, seed: int) -> InstanceSpec:
    """Deterministic instance for (task, size, seed), oracle answer included."""
    lo, hi = NODE_RANGES[task]
    if not (lo <= size <= hi):
        raise SizeOutOfRangeError(f"{task.value} size {size} outside [{lo}, {hi}]")
    rng = _rng(task, size, seed)
    p = _edge_probability(rng, size)
    builder = _BUILDERS[task]
    return builder(rng, size, seed, p)


def _cycle_instance(rng, size, seed, p) -> InstanceSpec:
    nodes = list(range(size))
    edges = _undirected_edges(rng, nodes, p)
    graph = _build_graph(nodes, edges, directed=False, weighted=False)
    text = (
        "Determine whether or not there is a cycle in an undirected graph. "
        "In an undirected graph, (i,j) means that node i and node j are "
        "connected with an undirected edge. "
        f"The nodes are numbered from 0 to {size - 1}, and the edges are: "
        f"{_format_tuples(edges, False)}. Is there a cycle in this graph?"
    )
    return InstanceSpec(Task.CYCLE, size, seed, p, text, graph, {},
                        oracles.oracle_solve(Task.CYCLE, graph, {}))


def _connectivity_instance(rng, size, seed, p) -> InstanceSpec:
    nodes = list(range(size))
    edges = _undirected_edges(rng, nodes, p)
    graph = _build_graph(nodes, edges, directed=False, weighted=False)
    source, target = rng.sample(nodes, 2)
    text = (
        "Determine whether two nodes are connected in an undirected graph. "
        "In an undirected graph, (i,j) means that node i and node j are "
        "connected with an undirected edge. "
        f"The nodes are numbered from 0 to {size - 1}, and the edges are: "
        f"{_format_tuples(edges, False)}. "
        f"Is there a path between node {source} and node {target}?"
    )
    params = {"source": source, "target": target}
    return InstanceSpec(Task.CONNECTIVITY, size, seed, p, text, graph, params,
                        oracles.oracle_solve(Task.CONNECTIVITY, graph, params))


def _bipartite_instance(rng, size, seed, p) -> InstanceSpec:
    nodes = list(range(size))
    if rng.random() < 0.5 and size >= 2:
        # planted bipartition so both answers occur often
        left = set(rng.sample(nodes, size // 2))
        candidates = [
            (u, v) for i, u in enumerate(nodes) for v in nodes[i + 1:]
            if (u in left) != (v in left)
        ]
        edges = [pair for pair in candidates if rng.random() < min(0.9, 2 * p)]
    else:
        edges = _undirected_edges(rng, nodes, p)
    graph = _build_graph(nodes, edges, directed=False, weighted=False)
    text = (
        "Determine whether or not a graph is bipartite. In an undirected "
        "graph, (i,j) means that node i and node j are connected with an "
        "undirected edge. "
        f"The nodes are numbered from 0 to {size - 1}, and the edges are: "
        f"{_format_tuples(edges, False)}. Is this graph bipartite?"
    )
    return InstanceSpec(Task.BIPARTITE, size, seed, p, text, graph, {},
                        oracles.oracle_solve(Task.BIPARTITE, graph, {}))


def _toposort_instance(rng, size, seed, p) -> InstanceSpec:
    nodes = list(range(size))
    ranking = list(nodes)
    rng.shuffle(ranking)
    position = {v: i for i, v in enumerate(ranking)}
    pairs = _undirected_edges(rng, nodes, p)
    edges = [(u, v) if position[u] < position[v] else (v, u) for u, v in pairs]
    graph = _build_graph(nodes, edges, directed=True, weighted=False)
    text = (
        "Find one of the topology sorting paths of the given graph. In a "
        "directed graph, (i,j) means that node i and node j are connected "
        "with a directed edge from node i to node j. "
        f"The nodes are numbered from 0 to {size - 1}, and the edges are: "
        f"{_format_tuples(edges, False)}. "
        "Give one topology sorting path of this graph."
    )
    return InstanceSpec(Task.TOPO_SORT, size, seed, p, text, graph, {},
                        oracles.oracle_solve(Task.TOPO_SORT, graph, {}))


def _shortest_path_instance(rng, size, seed, p) -> InstanceSpec:
    nodes = list(range(size))
    edges = _weighted(rng, _undirected_edges(rng, nodes, p))
    graph = _build_graph(nodes, edges, directed=False, weighted=True)
    source = rng.choice(nodes)
    text = (
        "Find the shortest distance from a source node to other nodes in an "
        "undirected graph. In an undirected graph, (i,j,k) means that node i "
        "and node j are connected with an undirected edge with weight k. "
        f"The graph has {size} nodes, and the edges are: "
        f"{_format_tuples(edges, True)}. "
        f"Give the weight of the shortest distance from node {source} to other node."
    )
    params = {"source": source}
    return InstanceSpec(Task.SHORTEST_PATH, size, seed, p, text, graph, params,
                        oracles.oracle_solve(Task.SHORTEST_PATH, graph, params))


def _triangle_instance(rng, size, seed, p) -> InstanceSpec:
    nodes = list(range(size))
    edges = _undirected_edges(rng, nodes, min(0.9, 2 * p))
    weights = {v: rng.randint(*WEIGHT_RANGE) for v in nodes}
    features = {v: str(w) for v, w in weights.items()}
    graph = _build_graph(nodes, edges, directed=False, weighted=False, features=features)
    weight_clauses = " ".join(f"The weight of node {v} is {weights[v]}." for v in nodes)
    text = (
        "Find the maximum sum of the weights of three interconnected nodes. "
        "In an undirected graph, (i,j) means that node i and node j are "
        "connected with an undirected edge. Every node has a weight. "
        f"The nodes are numbered from 0 to {size - 1}, and the edges are: "
        f"{_format_tuples(edges, False)}. {weight_clauses} "
        "What is the maximum sum of the weights of three interconnected nodes?"
    )
    return InstanceSpec(Task.TRIANGLE_SUM, size, seed, p, text, graph, {},
                        oracles.oracle_solve(Task.TRIANGLE_SUM, graph, {}))


def _max_flow_instance(rng, size, seed, p) -> InstanceSpec:
    nodes = list(range(size))
    edges = _weighted(rng, _directed_edges(rng, nodes, p))
    graph = _build_graph(nodes, edges, directed=True, weighted=True)
    source, sink = rng.sample(nodes, 2)
    text = (
        "Calculate the maximum flow between two nodes in a directed graph. "
        "In a directed graph, (i,j,k) means that node i and node j are "
        "connected with a directed edge with capacity k. "
        f"The nodes are numbered from 0 to {size - 1}, and the edges are: "
        f"{_format_tuples(edges, True)}. "
        f"What is the maximum flow from node {source} to node {sink}?"
    )
    params = {"source": source, "sink": sink}
    return InstanceSpec(Task.MAX_FLOW, size, seed, p, text, graph, params,
                        oracles.oracle_solve(Task.MAX_FLOW, graph, params))


def _pagerank_instance(rng, size, seed, p) -> InstanceSpec:
    # webpage networks are numbered from 1, exercising non-zero-based ids
    nodes = list(range(1, size + 1))
    edges = _directed_edges(rng, nodes, p)
    graph = _build_graph(nodes, edges, directed=True, weighted=False)
    text = (
        "This directed graph represents links between webpages: (i,j) means "
        "that webpage i links to webpage j. "
        f"The nodes are numbered from 1 to {size}, and the edges are: "
        f"{_format_tuples(edges, False)}. "
        "Use importance ranking to identify the most important webpages in this network."
    )
    return InstanceSpec(Task.PAGERANK, size, seed, p, text, graph, {},
                        oracles.oracle_solve(Task.PAGERANK, graph, {}))


def _hamilton_instance(rng, size, seed, p) -> InstanceSpec:
    nodes = list(range(size))
    edges = _undirected_edges(rng, nodes, min(0.9, 1.5 * p))
    graph = _build_graph(nodes, edges, directed=False, weighted=False)
    text = (
        "Determine whether or not there is a Hamiltonian path in an "
        "undirected graph. In an undirected graph, (i,j) means that node i "
        "and node j are connected with an undirected edge. "
        f"The nodes are numbered from 0 to {size - 1}, and the edges are: "
        f"{_format_tuples(edges, False)}. Is there a Hamiltonian path in this graph?"
    )
    return InstanceSpec(Task.HAMILTON, size, seed, p, text, graph, {},
                        oracles.oracle_solve(Task.HAMILTON, graph, {}))


_BUILDERS = {
    Task.CYCLE: _cycle_instance,
    Task.CONNECTIVITY: _connectivity_instance,
    Task.BIPARTITE: _bipartite_instance,
    Task.TOPO_SORT: _toposort_instance,
    Task.SHORTEST_PATH: _shortest_path_instance,
    Task.TRIANGLE_SUM: _triangle_instance,
    Task.MAX_FLOW: _max_flow_instance,
    Task.PAGERANK: _pagerank_instance,
    Task.HAMILTON: _hamilton_instance,
}
