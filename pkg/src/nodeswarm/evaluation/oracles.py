"""Sequential classical algorithms used as ground truth for scoring.

These are deliberately independent of the vertex programs: breadth-first
and depth-first search, union-find, 2-coloring, Kahn's algorithm,
Dijkstra, exhaustive triplet enumeration, augmenting-path max flow,
power iteration, and backtracking Hamiltonian search.
"""
from __future__ import annotations

import heapq
from collections import deque
from itertools import combinations

import numpy as np

from ..graph import Graph
from ..values import UNREACHABLE

HAMILTON_ORACLE_NODE_LIMIT = 20


def bfs_reachable(graph: Graph, source: int) -> set[int]:
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v, _ in graph.neighbors(u):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def connected(graph: Graph, u: int, v: int) -> bool:
    """Union-find over the edge list."""
    parent = {w: w for w in graph.node_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in graph.edges:
        ra, rb = find(e.src), find(e.dst)
        if ra != rb:
            parent[ra] = rb
    return find(u) == find(v)


def has_cycle(graph: Graph) -> bool:
    """Depth-first back-edge detection (iterative)."""
    if any(e.src == e.dst for e in graph.edges):
        return True
    if graph.directed:
        WHITE, GRAY, BLACK = 0, 1, 2
        color = {v: WHITE for v in graph.node_ids}
        for start in graph.node_ids:
            if color[start] != WHITE:
                continue
            stack = [(start, iter([v for v, _ in graph.neighbors(start)]))]
            color[start] = GRAY
            while stack:
                node, children = stack[-1]
                advanced = False
                for child in children:
                    if color[child] == GRAY:
                        return True
                    if color[child] == WHITE:
                        color[child] = GRAY
                        stack.append((child, iter([v for v, _ in graph.neighbors(child)])))
                        advanced = True
                        break
                if not advanced:
                    color[node] = BLACK
                    stack.pop()
        return False
    visited: set[int] = set()
    for start in graph.node_ids:
        if start in visited:
            continue
        stack = [(start, -1)]
        visited.add(start)
        while stack:
            node, parent = stack.pop()
            for child, _ in graph.neighbors(node):
                if child == parent:
                    parent = -2  # skip the tree edge back exactly once
                    continue
                if child in visited:
                    return True
                visited.add(child)
                stack.append((child, node))
    return False


def is_bipartite(graph: Graph) -> bool:
    """Breadth-first 2-coloring."""
    color: dict[int, int] = {}
    for start in graph.node_ids:
        if start in color:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v, _ in graph.neighbors(u):
                if v == u:
                    return False
                if v not in color:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return False
    return True


def topo_order(graph: Graph) -> list[int] | None:
    """Kahn's algorithm with an id-ordered frontier; None if cyclic."""
    in_degree = {v: len(graph.in_neighbors(v)) for v in graph.node_ids}
    ready = [v for v in graph.node_ids if in_degree[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v, _ in graph.neighbors(u):
            in_degree[v] -= 1
            if in_degree[v] == 0:
                heapq.heappush(ready, v)
    if len(order) != graph.node_count:
        return None
    return order


def is_valid_topo_order(graph: Graph, order: list[int]) -> bool:
    """Every directed edge (u, v) must place u before v; order must cover all nodes."""
    if sorted(order) != sorted(graph.node_ids):
        return False
    position = {v: i for i, v in enumerate(order)}
    return all(position[e.src] < position[e.dst] for e in graph.edges)


def dijkstra(graph: Graph, source: int) -> dict[int, int | float]:
    dist = {v: UNREACHABLE for v in graph.node_ids}
    dist[source] = 0
    heap = [(0, source)]
    done: set[int] = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in graph.neighbors(u):
            candidate = d + w
            if candidate < dist[v]:
                dist[v] = candidate
                heapq.heappush(heap, (candidate, v))
    return dist


def max_triangle_sum(graph: Graph) -> int | float | None:
    """Exhaustive check of every vertex triplet. None when triangle-free."""
    weights = {v: _numeric_feature(graph, v) for v in graph.node_ids}
    adjacency = {v: {n for n, _ in graph.neighbors(v) if n != v} for v in graph.node_ids}
    best = None
    for a, b, c in combinations(graph.node_ids, 3):
        if b in adjacency[a] and c in adjacency[a] and c in adjacency[b]:
            total = weights[a] + weights[b] + weights[c]
            if best is None or total > best:
                best = total
    return best


def _numeric_feature(graph: Graph, v: int):
    raw = graph.feature_of(v)
    if raw is None:
        raise ValueError(f"node {v} has no weight feature")
    try:
        return int(raw)
    except ValueError:
        return float(raw)


def edmonds_karp(graph: Graph, source: int, sink: int) -> int | float:
    """Sequential shortest-augmenting-path max flow."""
    residual: dict[int, dict[int, int | float]] = {v: {} for v in graph.node_ids}
    for e in graph.edges:
        residual[e.src][e.dst] = residual[e.src].get(e.dst, 0) + e.weight
        residual[e.dst].setdefault(e.src, 0)
        if not graph.directed:
            residual[e.dst][e.src] += e.weight
    flow = 0
    while True:
        parent = {source: source}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in sorted(residual[u]):
                if v not in parent and residual[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return flow
        bottleneck = None
        v = sink
        while v != source:
            u = parent[v]
            capacity = residual[u][v]
            bottleneck = capacity if bottleneck is None else min(bottleneck, capacity)
            v = u
        v = sink
        while v != source:
            u = parent[v]
            residual[u][v] -= bottleneck
            residual[v][u] = residual[v].get(u, 0) + bottleneck
            v = u
        flow += bottleneck


def min_cut_value(graph: Graph, source: int, sink: int) -> int | float:
    """Capacity of the source-side cut after running max flow."""
    residual: dict[int, dict[int, int | float]] = {v: {} for v in graph.node_ids}
    for e in graph.edges:
        residual[e.src][e.dst] = residual[e.src].get(e.dst, 0) + e.weight
        residual[e.dst].setdefault(e.src, 0)
        if not graph.directed:
            residual[e.dst][e.src] += e.weight
    capacity = {u: dict(vs) for u, vs in residual.items()}
    # saturate with the same augmenting loop
    while True:
        parent = {source: source}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in sorted(residual[u]):
                if v not in parent and residual[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            break
        bottleneck = None
        v = sink
        while v != source:
            u = parent[v]
            bottleneck = residual[u][v] if bottleneck is None else min(bottleneck, residual[u][v])
            v = u
        v = sink
        while v != source:
            u = parent[v]
            residual[u][v] -= bottleneck
            residual[v][u] = residual[v].get(u, 0) + bottleneck
            v = u
    reachable = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v, cap in residual[u].items():
            if cap > 0 and v not in reachable:
                reachable.add(v)
                queue.append(v)
    return sum(
        cap
        for u in reachable
        for v, cap in capacity[u].items()
        if v not in reachable
    )


def pagerank_power(graph: Graph, damping: float = 0.85, epsilon: float = 1e-6,
                   max_iterations: int = 100) -> dict[int, float]:
    """Dense power iteration with uniform dangling redistribution."""
    ids = list(graph.node_ids)
    index = {v: i for i, v in enumerate(ids)}
    n = len(ids)
    M = np.zeros((n, n))
    out_degree = np.zeros(n)
    for v in ids:
        neighbors = graph.neighbors(v)
        out_degree[index[v]] = len(neighbors)
        for u, _ in neighbors:
            M[index[u], index[v]] += 1.0
    for j in range(n):
        if out_degree[j] > 0:
            M[:, j] /= out_degree[j]
    x = np.full(n, 1.0 / n)
    for _ in range(max_iterations):
        dangling = x[out_degree == 0].sum()
        new_x = (1.0 - damping) / n + damping * (M @ x + dangling / n)
        if np.max(np.abs(new_x - x)) < epsilon:
            x = new_x
            break
        x = new_x
    return {v: float(x[index[v]]) for v in ids}


def hamilton_path_exists(graph: Graph) -> bool:
    """Exhaustive backtracking over simple paths; quadratic-degree pruned."""
    n = graph.node_count
    if n > HAMILTON_ORACLE_NODE_LIMIT:
        raise ValueError(f"exact Hamilton search is limited to {HAMILTON_ORACLE_NODE_LIMIT} nodes")
    if n == 1:
        return True
    adjacency = {v: [n2 for n2, _ in graph.neighbors(v) if n2 != v] for v in graph.node_ids}

    def extend(node: int, visited: set[int]) -> bool:
        if len(visited) == n:
            return True
        for child in adjacency[node]:
            if child not in visited:
                visited.add(child)
                if extend(child, visited):
                    return True
                visited.remove(child)
        return False

    return any(extend(start, {start}) for start in graph.node_ids)


def oracle_solve(task, graph: Graph, params: dict):
    """Ground-truth answer for any task, via the classical algorithms above."""
    from ..orchestrator import Answer, AnswerKind, Task

    if task is Task.CYCLE:
        answer = has_cycle(graph)
        narrative = "Yes, the graph contains a cycle." if answer else "No, the graph contains no cycle."
        return Answer(AnswerKind.BOOLEAN, answer, narrative)
    if task is Task.CONNECTIVITY:
        source, target = params["source"], params["target"]
        answer = connected(graph, source, target)
        narrative = (
            f"Yes, node {source} and node {target} are connected via a path."
            if answer
            else f"No, node {source} and node {target} are not connected."
        )
        return Answer(AnswerKind.BOOLEAN, answer, narrative)
    if task is Task.BIPARTITE:
        answer = is_bipartite(graph)
        narrative = "Yes, this graph is bipartite." if answer else "No, this graph is not bipartite."
        return Answer(AnswerKind.BOOLEAN, answer, narrative)
    if task is Task.TOPO_SORT:
        order = topo_order(graph)
        if order is None:
            raise ValueError("graph is not acyclic")
        narrative = "The topological order is: " + ", ".join(str(v) for v in order) + "."
        return Answer(AnswerKind.ORDERING, order, narrative)
    if task is Task.SHORTEST_PATH:
        source = params["source"]
        distances = dijkstra(graph, source)
        body = ", ".join(
            f"Node {v}: {'unreachable' if d is UNREACHABLE else d}"
            for v, d in sorted(distances.items())
        )
        narrative = f"The shortest distances from node {source} are as follows: {body}."
        return Answer(AnswerKind.DISTANCE_MAP, distances, narrative)
    if task is Task.TRIANGLE_SUM:
        best = max_triangle_sum(graph)
        if best is None:
            return Answer(AnswerKind.NO_SOLUTION, None,
                          "No solution: the graph contains no three interconnected nodes.")
        return Answer(AnswerKind.NUMBER, best,
                      f"The maximum sum of the weights of three interconnected nodes is {best}.")
    if task is Task.MAX_FLOW:
        source, sink = params["source"], params["sink"]
        flow = edmonds_karp(graph, source, sink)
        return Answer(AnswerKind.NUMBER, flow,
                      f"The maximum flow from node {source} to node {sink} is {flow}.")
    if task is Task.PAGERANK:
        ranks = pagerank_power(graph)
        ranking = sorted(ranks.items(), key=lambda kv: (-kv[1], kv[0]))
        lead = "The most important nodes are " + ", ".join(str(v) for v, _ in ranking[:3]) + "."
        body = ", ".join(f"Node {v}: {r!r}" for v, r in ranking)
        return Answer(AnswerKind.RANKING, ranking, f"{lead} Importance ranking: {body}.")
    if task is Task.HAMILTON:
        answer = hamilton_path_exists(graph)
        narrative = (
            "Yes, there is a Hamiltonian path in this graph."
            if answer
            else "No, there is no Hamiltonian path in this graph."
        )
        return Answer(AnswerKind.BOOLEAN, answer, narrative)
    raise ValueError(f"unhandled task {task}")
