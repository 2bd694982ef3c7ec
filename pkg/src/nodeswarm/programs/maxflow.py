"""Maximum flow by master-coordinated augmenting rounds.

Each outer iteration runs a distributed breadth-first search over the
current residual graph: newly reached nodes record the smallest-id sender
as their parent. The master extracts the augmenting path from the parent
pointers, pushes the bottleneck along it, updates residual capacities,
and repeats until the sink is unreachable. The accumulated flow is the
answer.
"""
from __future__ import annotations

from ..engine import Engine, RunResult, Termination
from ..errors import NegativeCapacityError, SourceEqualsSinkError, UnknownNodeError
from ..graph import Edge, Graph
from ..values import KIND_BOOL, KIND_NODE
from ..program import MasterCoordinated, VertexProgram, schema_doc

STATE_SCHEMA = {"reached": KIND_BOOL, "parent": KIND_NODE}
MESSAGE_SCHEMA = {"from_node": KIND_NODE}


def _init(ctx):
    return {"reached": ctx.node_id == ctx.params["source"], "parent": ctx.node_id}


def _send(ctx, state, prev_state, round, changed):
    if not state["reached"]:
        return []
    if round > 0 and not changed:
        return []
    return [(nbr, {"from_node": ctx.node_id}) for nbr, _ in ctx.neighbors]


def _update(ctx, state, inbox, round, aggregate):
    if state["reached"] or not inbox:
        return state
    parent = min(envelope.payload["from_node"] for envelope in inbox)
    return {"reached": True, "parent": parent}


def residual_bfs_program(source: int, sink: int) -> VertexProgram:
    """One breadth-first phase over the residual graph."""
    doc = {
        "State": schema_doc(STATE_SCHEMA)
        + "\n`parent` points to the node the search arrived from (itself until reached).",
        "Message": schema_doc(MESSAGE_SCHEMA),
        "Initialization": (
            f"Step 1: If your Node Id is {source} (the source), set `reached = True`.\n"
            "Step 2: Otherwise `reached = False`. Set `parent` to your own id."
        ),
        "Send": (
            "Step 1: If `reached` is True and it just became True (or this is the\n"
            "first round), announce your id to every out-neighbor in the residual\n"
            "graph. Otherwise send nothing."
        ),
        "Update": (
            "Step 1: If you are already reached, ignore all messages.\n"
            "Step 2: Otherwise set `reached = True` and `parent` to the smallest\n"
            "announcing node id."
        ),
        "Termination": (
            f"The search quiesces once the flood settles; node {sink}'s `reached`\n"
            "flag tells the master whether an augmenting path exists."
        ),
    }
    return VertexProgram(
        name="residual_bfs",
        state_schema=STATE_SCHEMA,
        message_schema=MESSAGE_SCHEMA,
        init_rule=_init,
        send_rule=_send,
        update_rule=_update,
        params={"source": source, "sink": sink},
        doc=doc,
    )


class MaxFlowSolver(MasterCoordinated):
    """Edmonds-Karp style outer loop around the residual BFS program."""

    name = "max_flow"

    def __init__(self, source: int, sink: int):
        if source == sink:
            raise SourceEqualsSinkError(f"source and sink are both node {source}")
        self.source = source
        self.sink = sink

    def run(self, graph: Graph, backend, cfg) -> RunResult:
        for v in (self.source, self.sink):
            if not graph.has_node(v):
                raise UnknownNodeError(f"flow endpoint {v} is not in the graph")
        residual: dict[tuple[int, int], int | float] = {}
        for e in graph.edges:
            if e.weight is None or e.weight < 0:
                raise NegativeCapacityError(
                    f"edge ({e.src},{e.dst}) needs a non-negative capacity"
                )
            residual[(e.src, e.dst)] = residual.get((e.src, e.dst), 0) + e.weight
            residual.setdefault((e.dst, e.src), 0)
            if not graph.directed:
                residual[(e.dst, e.src)] += e.weight

        total_flow: int | float = 0
        total_supersteps = 0
        trace = [] if cfg.trace_enabled else None
        phases = 0
        last = None
        while True:
            phases += 1
            phase_graph = _residual_graph(graph, residual)
            program = residual_bfs_program(self.source, self.sink)
            last = Engine(phase_graph, program, backend, cfg).run()
            total_supersteps += last.supersteps_executed
            if trace is not None and last.trace:
                trace.extend(last.trace)
            if not last.final_states[self.sink]["reached"]:
                break
            path = self._walk_parents(last.final_states)
            bottleneck = min(residual[arc] for arc in path)
            for u, v in path:
                residual[(u, v)] -= bottleneck
                residual[(v, u)] += bottleneck
            total_flow += bottleneck
        return RunResult(
            final_states=last.final_states,
            supersteps_executed=total_supersteps,
            termination=last.termination,
            trace=trace,
            master_info={"max_flow": total_flow, "phases": phases},
        )

    def _walk_parents(self, states) -> list[tuple[int, int]]:
        path = []
        v = self.sink
        while v != self.source:
            u = states[v]["parent"]
            path.append((u, v))
            v = u
        return path


def _residual_graph(graph: Graph, residual) -> Graph:
    arcs = tuple(
        Edge(src=u, dst=v, weight=cap)
        for (u, v), cap in sorted(residual.items())
        if cap > 0
    )
    return Graph(
        node_count=graph.node_count,
        node_ids=graph.node_ids,
        edges=arcs,
        directed=True,
        weighted=True,
    )
