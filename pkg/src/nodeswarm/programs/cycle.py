"""Cycle detection by iterative pruning.

Undirected graphs prune leaves: a node whose remaining degree is at most
one deactivates and tells its neighbors to decrement. Directed graphs
prune sources on remaining in-degree, Kahn style. Either way a cycle
exists exactly when some node survives the pruning; a self-loop keeps its
node alive forever.
"""
from __future__ import annotations

from ..values import KIND_BOOL, KIND_INT
from ..program import VertexProgram, schema_doc

STATE_SCHEMA = {"active": KIND_BOOL, "current_degree": KIND_INT}
MESSAGE_SCHEMA = {"pruned": KIND_BOOL}


def _relevant_degree(ctx) -> int:
    if ctx.directed:
        return sum(1 for nbr, _ in ctx.in_neighbors if nbr != ctx.node_id)
    return sum(1 for nbr, _ in ctx.neighbors if nbr != ctx.node_id)


def _has_self_loop(ctx) -> bool:
    return any(nbr == ctx.node_id for nbr, _ in ctx.neighbors)


def _prunable(ctx, degree: int) -> bool:
    if _has_self_loop(ctx):
        return False
    threshold = 0 if ctx.directed else 1
    return degree <= threshold


def _init(ctx):
    degree = _relevant_degree(ctx)
    return {"active": not _prunable(ctx, degree), "current_degree": degree}


def _send(ctx, state, prev_state, round, changed):
    just_pruned = (
        not state["active"]
        and (prev_state is None or prev_state["active"])
    )
    if not just_pruned:
        return []
    return [(nbr, {"pruned": True}) for nbr, _ in ctx.neighbors if nbr != ctx.node_id]


def _update(ctx, state, inbox, round, aggregate):
    if not state["active"] or not inbox:
        return state
    degree = state["current_degree"] - len(inbox)
    return {"active": not _prunable(ctx, degree), "current_degree": degree}


def cycle_detection_program() -> VertexProgram:
    doc = {
        "State": schema_doc(STATE_SCHEMA)
        + "\n`active` nodes may still lie on a cycle; `current_degree` counts\n"
        "remaining neighbors (remaining in-degree for directed graphs).",
        "Message": schema_doc(MESSAGE_SCHEMA) + "\nSent once by a node when it deactivates.",
        "Initialization": (
            "Step 1: Set `current_degree` to your neighbor count (in-degree if directed),\n"
            "ignoring self-loops.\n"
            "Step 2: Set `active = False` if that degree is prunable (<= 1 undirected,\n"
            "0 directed) and you have no self-loop; otherwise `active = True`."
        ),
        "Send": (
            "Step 1: If you deactivated in this round (or started deactivated), send\n"
            "`pruned: True` to every neighbor (out-neighbors if directed).\n"
            "Step 2: Otherwise send no messages."
        ),
        "Update": (
            "Step 1: If you are inactive, ignore all messages.\n"
            "Step 2: Subtract the number of received `pruned` messages from\n"
            "`current_degree`.\n"
            "Step 3: If the new degree is prunable and you have no self-loop, set\n"
            "`active = False`."
        ),
        "Termination": (
            "Pruning stops when no state changes. The graph contains a cycle exactly\n"
            "when some node is still active."
        ),
    }
    return VertexProgram(
        name="cycle_detection",
        state_schema=STATE_SCHEMA,
        message_schema=MESSAGE_SCHEMA,
        init_rule=_init,
        send_rule=_send,
        update_rule=_update,
        doc=doc,
    )
