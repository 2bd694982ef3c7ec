"""Hamiltonian-path search heuristic.

This is a HEURISTIC, not an exact decision procedure, and every answer it
produces is labeled as such. A seed node starts a path of length 1;
unvisited nodes extend path lengths as estimates flood outward, and the
answer is Yes exactly when some node's path length reaches the node count
within N rounds. The exact backtracking solver lives in the evaluation
module and is used to flag disagreements.
"""
from __future__ import annotations

from ..values import KIND_BOOL, KIND_INT
from ..program import VertexProgram, schema_doc

STATE_SCHEMA = {"visited": KIND_BOOL, "path_length": KIND_INT, "max_path_length": KIND_INT}
MESSAGE_SCHEMA = {"path_length": KIND_INT, "max_path_length": KIND_INT, "visited_flag": KIND_BOOL}

HEURISTIC_NOTE = "heuristic result, not exact"


def _init(ctx):
    if ctx.node_id == ctx.params["seed"]:
        return {"visited": True, "path_length": 1, "max_path_length": 1}
    return {"visited": False, "path_length": 0, "max_path_length": 1}


def _send(ctx, state, prev_state, round, changed):
    if round > 0 and state["visited"]:
        return []
    extended = state["path_length"] + 1
    payload = {
        "path_length": extended,
        "max_path_length": max(state["max_path_length"], extended),
        # the initial announcement is always extendable, seed included
        "visited_flag": state["visited"] if round > 0 else False,
    }
    return [(nbr, dict(payload)) for nbr, _ in ctx.neighbors if nbr != ctx.node_id]


def _update(ctx, state, inbox, round, aggregate):
    considered = [e.payload for e in inbox if not e.payload["visited_flag"]]
    if not considered:
        return state
    best_received = max(p["path_length"] for p in considered)
    best_max = max(p["max_path_length"] for p in considered)
    return {
        "visited": True,
        "path_length": max(state["path_length"], best_received) + 1,
        "max_path_length": max(state["max_path_length"], best_max),
    }


def hamilton_heuristic_program(seed: int = 0) -> VertexProgram:
    def terminated(prev_states, states, round):
        n = len(states)
        return any(s["path_length"] >= n for s in states.values())

    doc = {
        "State": schema_doc(STATE_SCHEMA)
        + "\n`visited` marks touched nodes, `path_length` the current path estimate,\n"
        "`max_path_length` the longest estimate seen.",
        "Message": schema_doc(MESSAGE_SCHEMA)
        + "\n`visited_flag` tells receivers whether the sender was already visited.",
        "Initialization": (
            "Step 1: Set `visited = False`, `path_length = 0`, and\n"
            "`max_path_length = 1` for all nodes.\n"
            f"Step 2: For the initial node (Node Id: {seed}), set `visited = True` and\n"
            "`path_length = 1`."
        ),
        "Send": (
            "Step 1: In the first round every node sends and marks its message\n"
            "`visited_flag = False`; afterwards only nodes with `visited = False`\n"
            "send, carrying their `visited` value as `visited_flag`.\n"
            "Step 2: To each neighbor send `path_length + 1` and\n"
            "`max(max_path_length, path_length + 1)`."
        ),
        "Update": (
            "Step 1: Ignore every message whose `visited_flag` is True.\n"
            "Step 2: If any message remains, set `visited = True`.\n"
            "Step 3: Set `path_length` to the maximum of its current value and the\n"
            "largest received `path_length`, incremented by 1.\n"
            "Step 4: Set `max_path_length` to the maximum of its current value and\n"
            "the largest received `max_path_length`."
        ),
        "Termination": (
            "The algorithm stops when a node reaches a `path_length` equal to the\n"
            "total number of nodes (a Hamiltonian path is assumed to exist), or\n"
            "after N rounds without one (answer No). This is a heuristic and can\n"
            "disagree with exhaustive search."
        ),
    }
    return VertexProgram(
        name="hamilton_heuristic",
        state_schema=STATE_SCHEMA,
        message_schema=MESSAGE_SCHEMA,
        init_rule=_init,
        send_rule=_send,
        update_rule=_update,
        termination_rule=terminated,
        params={"seed": seed},
        doc=doc,
        default_max_supersteps=lambda graph: max(1, graph.node_count),
    )
