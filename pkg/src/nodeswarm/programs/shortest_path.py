"""Single-source shortest path as a vertex program.

Each node keeps its best known distance from the source; whenever the
distance improves it offers ``distance + edge weight`` to every neighbor.
Quiescence leaves every node holding the true shortest distance.
"""
from __future__ import annotations

from ..errors import NegativeWeightError
from ..values import KIND_NUMBER, UNREACHABLE
from ..program import VertexProgram, schema_doc

STATE_SCHEMA = {"distance": KIND_NUMBER}
MESSAGE_SCHEMA = {"new_distance": KIND_NUMBER}


def _init(ctx):
    return {"distance": 0 if ctx.node_id == ctx.params["source"] else UNREACHABLE}


def _send(ctx, state, prev_state, round, changed):
    if round > 0 and not changed:
        return []
    distance = state["distance"]
    return [(nbr, {"new_distance": distance + weight}) for nbr, weight in ctx.neighbors]


def _update(ctx, state, inbox, round, aggregate):
    if not inbox:
        return state
    best = state["distance"]
    for envelope in inbox:
        offered = envelope.payload["new_distance"]
        if offered < best:
            best = offered
    return {"distance": best}


def shortest_path_program(source: int, graph=None) -> VertexProgram:
    """Build the program; rejects negative edge weights when given the graph."""
    if graph is not None:
        for e in graph.edges:
            if e.weight is not None and e.weight < 0:
                raise NegativeWeightError(
                    f"edge ({e.src},{e.dst}) has negative weight {e.weight}"
                )
    doc = {
        "State": schema_doc(STATE_SCHEMA)
        + "\n`distance` is the best known distance from the source node.",
        "Message": schema_doc(MESSAGE_SCHEMA)
        + "\n`new_distance` is a candidate distance offered to the receiving node.",
        "Initialization": (
            f"Step 1: If your Node Id is {source} (the source), set `distance = 0`.\n"
            "Step 2: Otherwise set `distance = \\infinity`."
        ),
        "Send": (
            "Step 1: If this is the first round, or your `distance` changed in this\n"
            "round's update, compute `new_distance = distance + edge weight` for each\n"
            "neighbor (\\infinity plus anything stays \\infinity).\n"
            "Step 2: Send each neighbor its `new_distance`. Otherwise send no messages."
        ),
        "Update": (
            "Step 1: For each received message, compare `new_distance` with your `distance`.\n"
            "Step 2: Keep the minimum of your `distance` and every received `new_distance`."
        ),
        "Termination": "The algorithm stops when no node's `distance` changed in a full round.",
    }
    return VertexProgram(
        name="shortest_path",
        state_schema=STATE_SCHEMA,
        message_schema=MESSAGE_SCHEMA,
        init_rule=_init,
        send_rule=_send,
        update_rule=_update,
        params={"source": source},
        doc=doc,
    )
