"""Two-colorability check by flood coloring.

A seed node takes color 0 and neighbors adopt the opposite color as the
flood spreads. A node that receives its own color (or both colors at
once) marks a conflict; the graph is bipartite exactly when no node ever
conflicts. Components untouched by the flood are handled by a master
loop that reseeds from the smallest uncolored node and carries previous
colors forward.
"""
from __future__ import annotations

from ..engine import Engine, RunResult
from ..values import KIND_BOOL, KIND_INT
from ..program import MasterCoordinated, VertexProgram, schema_doc

UNSET = -1

STATE_SCHEMA = {"color": KIND_INT, "conflict": KIND_BOOL}
MESSAGE_SCHEMA = {"color": KIND_INT}


def _init(ctx):
    preset = dict(ctx.params.get("preset_colors", ()))
    conflicts = set(ctx.params.get("preset_conflicts", ()))
    if ctx.node_id == ctx.params["seed"]:
        return {"color": 0, "conflict": ctx.node_id in conflicts}
    return {"color": preset.get(ctx.node_id, UNSET), "conflict": ctx.node_id in conflicts}


def _send(ctx, state, prev_state, round, changed):
    if state["color"] == UNSET:
        return []
    if round == 0:
        if ctx.node_id != ctx.params["seed"]:
            return []
    elif not changed:
        return []
    return [(nbr, {"color": state["color"]}) for nbr, _ in ctx.neighbors]


def _update(ctx, state, inbox, round, aggregate):
    if not inbox:
        return state
    seen = {envelope.payload["color"] for envelope in inbox}
    color, conflict = state["color"], state["conflict"]
    if color == UNSET:
        if seen == {0, 1}:
            conflict = True
        color = 1 - min(seen)
    elif color in seen:
        conflict = True
    return {"color": color, "conflict": conflict}


def bipartite_program(seed: int, preset_colors=(), preset_conflicts=()) -> VertexProgram:
    """One flood-coloring phase; the master reseeds per component."""
    doc = {
        "State": schema_doc(STATE_SCHEMA)
        + "\n`color` is -1 while unset, else 0 or 1; `conflict` marks a same-color clash.",
        "Message": schema_doc(MESSAGE_SCHEMA),
        "Initialization": (
            f"Step 1: If your Node Id is {seed} (the seed), set `color = 0`.\n"
            "Step 2: Otherwise keep a previously assigned color, or -1 if none."
        ),
        "Send": (
            "Step 1: In the first round, only the seed announces its color.\n"
            "Step 2: Afterwards, announce your color to every neighbor whenever your\n"
            "state changed this round. Uncolored nodes send nothing."
        ),
        "Update": (
            "Step 1: If you are uncolored, adopt the opposite of the smallest received\n"
            "color; receiving both colors at once is a conflict.\n"
            "Step 2: If you are colored and any received color equals yours, set\n"
            "`conflict = True`. Your color never changes once set."
        ),
        "Termination": (
            "Each flood stops at quiescence; the master reseeds from the smallest\n"
            "uncolored node until every node is colored. The graph is bipartite\n"
            "exactly when no node reports a conflict."
        ),
    }
    return VertexProgram(
        name="bipartite",
        state_schema=STATE_SCHEMA,
        message_schema=MESSAGE_SCHEMA,
        init_rule=_init,
        send_rule=_send,
        update_rule=_update,
        params={
            "seed": seed,
            "preset_colors": tuple(preset_colors),
            "preset_conflicts": tuple(preset_conflicts),
        },
        doc=doc,
    )


class BipartiteSolver(MasterCoordinated):
    """Runs flood-coloring phases until every component is colored."""

    name = "bipartite"

    def run(self, graph, backend, cfg) -> RunResult:
        colors: dict[int, int] = {}
        conflicts: set[int] = set()
        total_supersteps = 0
        trace = [] if cfg.trace_enabled else None
        phases = 0
        last = None
        while True:
            uncolored = [v for v in graph.node_ids if v not in colors]
            if not uncolored:
                break
            phases += 1
            program = bipartite_program(
                seed=min(uncolored),
                preset_colors=tuple(sorted(colors.items())),
                preset_conflicts=tuple(sorted(conflicts)),
            )
            last = Engine(graph, program, backend, cfg).run()
            total_supersteps += last.supersteps_executed
            if trace is not None and last.trace:
                trace.extend(last.trace)
            for v, state in last.final_states.items():
                if state["color"] != UNSET:
                    colors[v] = state["color"]
                if state["conflict"]:
                    conflicts.add(v)
        from ..engine import Termination

        return RunResult(
            final_states={v: {"color": colors[v], "conflict": v in conflicts} for v in graph.node_ids},
            supersteps_executed=total_supersteps,
            termination=last.termination if last is not None else Termination.CONVERGED,
            trace=trace,
            master_info={"phases": phases},
        )
