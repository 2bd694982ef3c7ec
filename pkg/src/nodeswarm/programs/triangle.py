"""Maximum weight of a connected vertex triplet.

Every node broadcasts its weight and its neighbor set once; on receiving
the broadcasts, a node checks each pair of its neighbors for mutual
adjacency and records the best triangle sum it participates in. The
summarizer takes the global maximum.
"""
from __future__ import annotations

from itertools import combinations

from ..errors import MissingNodeWeightError
from ..values import KIND_BOOL, KIND_NODE_LIST, KIND_NUMBER
from ..program import VertexProgram, schema_doc

STATE_SCHEMA = {"best_sum": KIND_NUMBER, "has_triangle": KIND_BOOL}
MESSAGE_SCHEMA = {"weight": KIND_NUMBER, "neighbors": KIND_NODE_LIST}


def node_weight(ctx) -> int | float:
    feature = ctx.feature
    if feature is None:
        raise MissingNodeWeightError(f"node {ctx.node_id} has no weight")
    try:
        return int(feature)
    except ValueError:
        try:
            return float(feature)
        except ValueError:
            raise MissingNodeWeightError(
                f"node {ctx.node_id} weight {feature!r} is not numeric"
            ) from None


def _init(ctx):
    return {"best_sum": 0, "has_triangle": False}


def _send(ctx, state, prev_state, round, changed):
    if round > 0:
        return []
    weight = node_weight(ctx)
    neighbor_ids = tuple(sorted(n for n, _ in ctx.neighbors if n != ctx.node_id))
    return [
        (nbr, {"weight": weight, "neighbors": neighbor_ids})
        for nbr in neighbor_ids
    ]


def _update(ctx, state, inbox, round, aggregate):
    if not inbox:
        return state
    weights = {}
    adjacency = {}
    for envelope in inbox:
        weights[envelope.sender] = envelope.payload["weight"]
        adjacency[envelope.sender] = set(envelope.payload["neighbors"])
    own = node_weight(ctx)
    best = state["best_sum"]
    found = state["has_triangle"]
    for u, w in combinations(sorted(weights), 2):
        if w in adjacency[u]:
            total = own + weights[u] + weights[w]
            if not found or total > best:
                best = total
            found = True
    return {"best_sum": best, "has_triangle": found}


def triangle_sum_program(graph=None) -> VertexProgram:
    """Build the program; checks up front that every node carries a weight."""
    if graph is not None:
        for v in graph.node_ids:
            feature = graph.feature_of(v)
            if feature is None:
                raise MissingNodeWeightError(f"node {v} has no weight")
    doc = {
        "State": schema_doc(STATE_SCHEMA)
        + "\n`best_sum` is the best triangle weight this node participates in.",
        "Message": schema_doc(MESSAGE_SCHEMA)
        + "\nEach node broadcasts its own weight and its full neighbor list.",
        "Initialization": "Step 1: Set `best_sum = 0` and `has_triangle = False`.",
        "Send": (
            "Step 1: In the first round only, send your node weight and your sorted\n"
            "neighbor list to every neighbor.\n"
            "Step 2: Send nothing afterwards."
        ),
        "Update": (
            "Step 1: Record each sender's weight and neighbor list.\n"
            "Step 2: For every pair of senders (u, w), if w appears in u's neighbor\n"
            "list, the triplet (you, u, w) is a triangle; compute the sum of the\n"
            "three node weights.\n"
            "Step 3: Keep the maximum such sum in `best_sum` and set\n"
            "`has_triangle = True` if any triangle was found."
        ),
        "Termination": (
            "The algorithm quiesces after one exchange; the answer is the maximum\n"
            "`best_sum` over all nodes, or 'no triangle' if none was found."
        ),
    }
    return VertexProgram(
        name="triangle_sum",
        state_schema=STATE_SCHEMA,
        message_schema=MESSAGE_SCHEMA,
        init_rule=_init,
        send_rule=_send,
        update_rule=_update,
        doc=doc,
    )
