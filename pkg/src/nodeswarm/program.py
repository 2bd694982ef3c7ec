"""Vertex program structure: the six-component algorithm template.

A vertex program describes one distributed algorithm through six parts:
State, Message, Initialization, Send, Update, and Termination. The rule
functions are pure; the engine and the agent backends supply all inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from .graph import Graph
from .values import ALL_KINDS

# A state is a plain field map; a send result is (recipient, payload) pairs.
VertexState = "dict[str, Any]"
Payload = "dict[str, Any]"

SECTION_ORDER = ("State", "Message", "Initialization", "Send", "Update", "Termination")


@dataclass(frozen=True)
class NodeContext:
    """Static per-node inputs available to every rule function."""

    node_id: int
    neighbors: tuple[tuple[int, int | float | None], ...]
    in_neighbors: tuple[tuple[int, int | float | None], ...]
    node_count: int
    directed: bool
    params: Mapping[str, Any]
    feature: str | None = None

    @property
    def neighbor_ids(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.neighbors)

    @property
    def out_degree(self) -> int:
        return len(self.neighbors)


@dataclass(frozen=True)
class VertexProgram:
    """One algorithm template, executed identically at every node.

    Rules:
      init_rule(ctx) -> state
      send_rule(ctx, state, prev_state, round, changed) -> [(recipient, payload)]
      update_rule(ctx, state, inbox, round, aggregate) -> state
      termination_rule(prev_states, states, round) -> bool     (optional)
      aggregator(graph, states) -> mapping                     (optional;
          computed by the master at each barrier, fed to the next Update)
    """

    name: str
    state_schema: Mapping[str, str]
    message_schema: Mapping[str, str]
    init_rule: Callable
    send_rule: Callable
    update_rule: Callable
    termination_rule: Callable | None = None
    aggregator: Callable | None = None
    params: Mapping[str, Any] = field(default_factory=dict)
    doc: Mapping[str, str] = field(default_factory=dict)
    default_max_supersteps: Callable[[Graph], int] | None = None

    def validate(self) -> None:
        for schema_name, schema in (("state", self.state_schema), ("message", self.message_schema)):
            for fname, kind in schema.items():
                if kind not in ALL_KINDS:
                    raise ValueError(f"{self.name}: {schema_name} field {fname!r} has unknown kind {kind!r}")

    def section(self, name: str) -> str:
        return self.doc.get(name, "")


def serialize_template(program: VertexProgram) -> str:
    """Render the six labeled sections as one template document."""
    blocks = []
    for section in SECTION_ORDER:
        text = program.section(section).rstrip()
        blocks.append(f"### {section}\n{text}")
    return "\n".join(blocks) + "\n"


def schema_doc(schema: Mapping[str, str]) -> str:
    return "\n".join(f"{i}. `{name}`: {kind}" for i, (name, kind) in enumerate(schema.items(), 1))


class MasterCoordinated:
    """Base for tasks that wrap the engine in a master-driven outer loop.

    Subclasses implement run(graph, backend, cfg) and return a RunResult
    whose supersteps_executed totals every phase.
    """

    name = "master-coordinated"

    def run(self, graph: Graph, backend, cfg):  # pragma: no cover - interface
        raise NotImplementedError
