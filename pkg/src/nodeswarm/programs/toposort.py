"""Topological layering by distributed in-degree pruning.

Nodes whose remaining in-degree reaches zero in round r adopt layer r and
tell their out-neighbors to decrement. Sorting nodes by (layer, id) gives
a valid topological order; nodes left without a layer reveal a cycle.
"""
from __future__ import annotations

from ..values import KIND_BOOL, KIND_INT, KIND_NUMBER, UNREACHABLE
from ..program import VertexProgram, schema_doc

STATE_SCHEMA = {"remaining_in_degree": KIND_INT, "layer": KIND_NUMBER}
MESSAGE_SCHEMA = {"resolved": KIND_BOOL}


def _init(ctx):
    in_degree = len(ctx.in_neighbors)
    layer = 0 if in_degree == 0 else UNREACHABLE
    return {"remaining_in_degree": in_degree, "layer": layer}


def _send(ctx, state, prev_state, round, changed):
    just_resolved = (
        state["layer"] is not UNREACHABLE
        and (prev_state is None or prev_state["layer"] is UNREACHABLE)
    )
    if not just_resolved:
        return []
    return [(nbr, {"resolved": True}) for nbr, _ in ctx.neighbors]


def _update(ctx, state, inbox, round, aggregate):
    if state["layer"] is not UNREACHABLE or not inbox:
        return state
    remaining = state["remaining_in_degree"] - len(inbox)
    layer = round if remaining == 0 else UNREACHABLE
    return {"remaining_in_degree": remaining, "layer": layer}


def topological_sort_program() -> VertexProgram:
    doc = {
        "State": schema_doc(STATE_SCHEMA)
        + "\n`layer` is \\infinity until the node's remaining in-degree reaches zero.",
        "Message": schema_doc(MESSAGE_SCHEMA) + "\nSent once by a node when its layer resolves.",
        "Initialization": (
            "Step 1: Set `remaining_in_degree` to your in-degree.\n"
            "Step 2: If it is zero, set `layer = 0`; otherwise `layer = \\infinity`."
        ),
        "Send": (
            "Step 1: If your layer resolved in this round (or at initialization), send\n"
            "`resolved: True` to every out-neighbor.\n"
            "Step 2: Otherwise send no messages."
        ),
        "Update": (
            "Step 1: If your layer is already set, ignore all messages.\n"
            "Step 2: Subtract the number of received messages from\n"
            "`remaining_in_degree`.\n"
            "Step 3: If it reached zero, set `layer` to the current round number."
        ),
        "Termination": (
            "Layering stops at quiescence. Reading nodes in increasing (layer, id)\n"
            "order yields a topological order; a node left at \\infinity means the\n"
            "graph is not acyclic."
        ),
    }
    return VertexProgram(
        name="topological_sort",
        state_schema=STATE_SCHEMA,
        message_schema=MESSAGE_SCHEMA,
        init_rule=_init,
        send_rule=_send,
        update_rule=_update,
        doc=doc,
    )
