"""PageRank as synchronized rank exchange.

Every node starts at 1/N, streams rank/out_degree to its out-neighbors
each round, and recomputes (1-d)/N + d * (incoming + dangling share).
Nodes without out-neighbors hand their rank to the master, which
redistributes it uniformly through the shared values channel. The run
stops when no rank moved more than epsilon.
"""
from __future__ import annotations

from ..values import KIND_NUMBER
from ..program import VertexProgram, schema_doc

DEFAULT_DAMPING = 0.85
DEFAULT_EPSILON = 1e-6
DEFAULT_MAX_ITERATIONS = 100

STATE_SCHEMA = {"rank": KIND_NUMBER}
MESSAGE_SCHEMA = {"share": KIND_NUMBER}


def _init(ctx):
    return {"rank": 1.0 / ctx.node_count}


def _send(ctx, state, prev_state, round, changed):
    if ctx.out_degree == 0:
        return []
    share = state["rank"] / ctx.out_degree
    return [(nbr, {"share": share}) for nbr, _ in ctx.neighbors]


def _update(ctx, state, inbox, round, aggregate):
    damping = ctx.params["damping"]
    n = ctx.node_count
    incoming = sum(envelope.payload["share"] for envelope in inbox)
    dangling = aggregate["dangling_mass"] if aggregate else 0.0
    rank = (1.0 - damping) / n + damping * (incoming + dangling / n)
    return {"rank": rank}


def _dangling_aggregator(graph, states):
    mass = sum(states[v]["rank"] for v in graph.node_ids if len(graph.neighbors(v)) == 0)
    return {"dangling_mass": mass}


def pagerank_program(damping: float = DEFAULT_DAMPING, epsilon: float = DEFAULT_EPSILON,
                     max_iterations: int = DEFAULT_MAX_ITERATIONS) -> VertexProgram:
    def terminated(prev_states, states, round):
        if prev_states is None:
            return False
        return all(
            abs(states[v]["rank"] - prev_states[v]["rank"]) < epsilon for v in states
        )

    doc = {
        "State": schema_doc(STATE_SCHEMA) + "\n`rank` is the node's current importance score.",
        "Message": schema_doc(MESSAGE_SCHEMA) + "\n`share` is the sender's rank split over its out-edges.",
        "Initialization": "Step 1: Set `rank = 1 / N`, where N is the number of nodes.",
        "Send": (
            "Step 1: Every round, send `share = rank / out_degree` to each\n"
            "out-neighbor.\n"
            "Step 2: If you have no out-neighbors, send nothing; the master\n"
            "redistributes your rank uniformly."
        ),
        "Update": (
            f"Step 1: Sum the received `share` values plus your uniform slice of the\n"
            "dangling mass from the shared values.\n"
            f"Step 2: Set `rank = (1 - {damping}) / N + {damping} * that sum`."
        ),
        "Termination": (
            f"The iteration stops when every rank moved less than {epsilon} in a\n"
            f"round, or after {max_iterations} rounds."
        ),
    }
    return VertexProgram(
        name="pagerank",
        state_schema=STATE_SCHEMA,
        message_schema=MESSAGE_SCHEMA,
        init_rule=_init,
        send_rule=_send,
        update_rule=_update,
        termination_rule=terminated,
        aggregator=_dangling_aggregator,
        params={"damping": damping, "epsilon": epsilon},
        doc=doc,
        default_max_supersteps=lambda graph: max_iterations,
    )
