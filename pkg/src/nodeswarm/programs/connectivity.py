"""Connectivity check: flood a reached flag outward from the source.

The reached set only grows; once the flood quiesces, the target's flag
answers whether the two query nodes are connected.
"""
from __future__ import annotations

from ..errors import UnknownNodeError
from ..values import KIND_BOOL
from ..program import VertexProgram, schema_doc

STATE_SCHEMA = {"reached": KIND_BOOL}
MESSAGE_SCHEMA = {"reached": KIND_BOOL}


def _init(ctx):
    return {"reached": ctx.node_id == ctx.params["source"]}


def _send(ctx, state, prev_state, round, changed):
    if not state["reached"]:
        return []
    if round > 0 and not changed:
        return []
    return [(nbr, {"reached": True}) for nbr, _ in ctx.neighbors]


def _update(ctx, state, inbox, round, aggregate):
    if state["reached"] or not inbox:
        return state
    return {"reached": True}


def connectivity_program(source: int, target: int, graph=None) -> VertexProgram:
    if graph is not None:
        for v in (source, target):
            if not graph.has_node(v):
                raise UnknownNodeError(f"query node {v} is not in the graph")
    doc = {
        "State": schema_doc(STATE_SCHEMA) + "\n`reached` marks nodes the flood has visited.",
        "Message": schema_doc(MESSAGE_SCHEMA),
        "Initialization": (
            f"Step 1: If your Node Id is {source}, set `reached = True`.\n"
            "Step 2: Otherwise set `reached = False`."
        ),
        "Send": (
            "Step 1: If `reached` is True and it just became True (or this is the\n"
            "first round), send `reached: True` to every neighbor.\n"
            "Step 2: Otherwise send no messages."
        ),
        "Update": "Step 1: If any message arrived and `reached` is False, set `reached = True`.",
        "Termination": (
            f"The flood stops when no state changes; node {target}'s flag then answers\n"
            "whether the two query nodes are connected."
        ),
    }
    return VertexProgram(
        name="connectivity",
        state_schema=STATE_SCHEMA,
        message_schema=MESSAGE_SCHEMA,
        init_rule=_init,
        send_rule=_send,
        update_rule=_update,
        params={"source": source, "target": target},
        doc=doc,
    )
