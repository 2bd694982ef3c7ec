"""Synchronous superstep engine.

Execution follows the distributed paradigm: every agent initializes its
state and sends an initial message, then rounds of receive -> update ->
send repeat behind a barrier until the termination rule fires, no state
changes in a full round, or the iteration cap is reached. Messages sent
in round i are delivered only in round i+1, and all messages travel along
graph edges.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .errors import BackendFailureError, NodeswarmError, SchemaViolationError
from .graph import Graph
from .program import NodeContext, VertexProgram
from .values import fields_equal, render_value, validate_fields


@dataclass(frozen=True)
class MessageEnvelope:
    sender: int
    recipient: int
    payload: Mapping[str, Any]


@dataclass(frozen=True)
class EngineConfig:
    """Runtime knobs; max_supersteps=None defers to the program's default."""

    max_supersteps: int | None = None
    deterministic_order: bool = True
    trace_enabled: bool = False
    schedule_seed: int | None = None

    def __post_init__(self):
        if self.max_supersteps is not None and self.max_supersteps < 1:
            raise ValueError("max_supersteps must be >= 1")


class Termination(enum.Enum):
    CONVERGED = "converged"
    TERMINATION_RULE_MET = "termination_rule_met"
    ITERATION_CAP_REACHED = "iteration_cap_reached"


@dataclass(frozen=True)
class DeliveryRecord:
    envelope: MessageEnvelope
    sent_round: int
    delivered_round: int


@dataclass(frozen=True)
class RoundTrace:
    superstep: int
    deliveries: tuple[DeliveryRecord, ...]
    state_changes: tuple[tuple[int, Mapping[str, Any] | None, Mapping[str, Any]], ...]


@dataclass
class RunResult:
    final_states: dict[int, dict[str, Any]]
    supersteps_executed: int
    termination: Termination
    trace: list[RoundTrace] | None = None
    master_info: dict[str, Any] | None = None


class Engine:
    """Runs one vertex program over one graph through an agent backend."""

    def __init__(self, graph: Graph, program: VertexProgram, backend, cfg: EngineConfig = EngineConfig()):
        program.validate()
        self.graph = graph
        self.program = program
        self.backend = backend
        self.cfg = cfg
        if cfg.max_supersteps is not None:
            self.max_supersteps = cfg.max_supersteps
        elif program.default_max_supersteps is not None:
            self.max_supersteps = program.default_max_supersteps(graph)
        else:
            self.max_supersteps = graph.node_count + 1
        self._contexts = {
            v: NodeContext(
                node_id=v,
                neighbors=graph.neighbors(v),
                in_neighbors=graph.in_neighbors(v),
                node_count=graph.node_count,
                directed=graph.directed,
                params=dict(program.params),
                feature=graph.feature_of(v),
            )
            for v in graph.node_ids
        }
        self._neighbor_sets = {v: frozenset(n for n, _ in graph.neighbors(v)) for v in graph.node_ids}
        self._states: dict[int, dict[str, Any]] = {}
        self._prev_states: dict[int, dict[str, Any]] | None = None
        self._pending: list[tuple[MessageEnvelope, int]] = []
        self._aggregate: Mapping[str, Any] | None = None
        self._round = 0
        self._rng = random.Random(cfg.schedule_seed)
        self.trace: list[RoundTrace] = []
        self._initialized = False

    # -- public stepping API -------------------------------------------------

    def initialize(self) -> None:
        """Run Initialization for every agent, then the initial Send."""
        order = self._schedule()
        results = self._call_backend(
            [dict(phase="init", ctx=self._contexts[v]) for v in order]
        )
        for v, state in zip(order, results):
            validate_fields(self.program.state_schema, state, f"init state of node {v}")
            self._states[v] = dict(state)
        self._refresh_aggregate()
        self._collect_sends(prev_states=None, changed={v: True for v in order}, send_round=0)
        if self.cfg.trace_enabled:
            changes = tuple(sorted((v, None, dict(self._states[v])) for v in self._states))
            self.trace.append(RoundTrace(superstep=0, deliveries=(), state_changes=changes))
        self._initialized = True

    def superstep(self) -> bool:
        """One receive -> update -> send round. Returns whether any state changed."""
        if not self._initialized:
            raise NodeswarmError("superstep() before initialize()")
        self._round += 1
        inboxes: dict[int, list[tuple[MessageEnvelope, int]]] = {}
        for envelope, sent_round in self._pending:
            inboxes.setdefault(envelope.recipient, []).append((envelope, sent_round))
        deliveries = []
        sorted_inboxes: dict[int, tuple[MessageEnvelope, ...]] = {}
        for v, entries in inboxes.items():
            entries.sort(key=lambda e: e[0].sender)
            sorted_inboxes[v] = tuple(e for e, _ in entries)
            if self.cfg.trace_enabled:
                deliveries.extend(
                    DeliveryRecord(envelope=e, sent_round=r, delivered_round=self._round)
                    for e, r in entries
                )
        self._pending = []

        order = self._schedule()
        requests = [
            dict(
                phase="update",
                ctx=self._contexts[v],
                state=dict(self._states[v]),  # rules never see the live dict
                inbox=sorted_inboxes.get(v, ()),
                round=self._round,
                aggregate=self._aggregate,
            )
            for v in order
        ]
        results = self._call_backend(requests)

        prev = self._states
        new_states: dict[int, dict[str, Any]] = {}
        changed: dict[int, bool] = {}
        for v, state in zip(order, results):
            validate_fields(self.program.state_schema, state, f"round {self._round} state of node {v}")
            new_states[v] = dict(state)
            changed[v] = not fields_equal(prev[v], state)
        self._prev_states = prev
        self._states = new_states
        self._refresh_aggregate()
        self._collect_sends(prev_states=prev, changed=changed, send_round=self._round)

        if self.cfg.trace_enabled:
            changes = tuple(
                sorted((v, dict(prev[v]), dict(new_states[v])) for v in new_states if changed[v])
            )
            self.trace.append(
                RoundTrace(
                    superstep=self._round,
                    deliveries=tuple(sorted(deliveries, key=lambda d: (d.envelope.sender, d.envelope.recipient))),
                    state_changes=changes,
                )
            )
        return any(changed.values())

    def run(self) -> RunResult:
        self.initialize()
        termination = Termination.ITERATION_CAP_REACHED
        if self._terminated():
            termination = Termination.TERMINATION_RULE_MET
        else:
            while self._round < self.max_supersteps:
                any_changed = self.superstep()
                if not any_changed:
                    termination = Termination.CONVERGED
                    break
                if self._terminated():
                    termination = Termination.TERMINATION_RULE_MET
                    break
        return RunResult(
            final_states={v: dict(s) for v, s in sorted(self._states.items())},
            supersteps_executed=self._round,
            termination=termination,
            trace=self.trace if self.cfg.trace_enabled else None,
        )

    def current_states(self) -> dict[int, dict[str, Any]]:
        return {v: dict(s) for v, s in self._states.items()}

    @property
    def rounds_executed(self) -> int:
        return self._round

    # -- internals -------------------------------------------------------------

    def _schedule(self) -> list[int]:
        order = sorted(self._contexts)
        if not self.cfg.deterministic_order:
            self._rng.shuffle(order)
        return order

    def _call_backend(self, requests: Sequence[dict]) -> list:
        try:
            return self.backend.phase_bulk(self.program, requests)
        except NodeswarmError:
            raise
        except Exception as exc:  # backend implementation bug or transport giving up
            raise BackendFailureError(f"agent backend failed: {exc}") from exc

    def _collect_sends(self, prev_states, changed: Mapping[int, bool], send_round: int) -> None:
        order = self._schedule()
        requests = [
            dict(
                phase="send",
                ctx=self._contexts[v],
                state=dict(self._states[v]),
                prev_state=None if prev_states is None else dict(prev_states[v]),
                round=send_round,
                changed=changed[v],
            )
            for v in order
        ]
        results = self._call_backend(requests)
        outgoing: list[tuple[MessageEnvelope, int]] = []
        for v, messages in zip(order, results):
            allowed = self._neighbor_sets[v]
            for recipient, payload in messages:
                if recipient not in allowed:
                    raise SchemaViolationError(
                        f"node {v} sent a message to non-neighbor {recipient}"
                    )
                validate_fields(self.program.message_schema, payload, f"message {v}->{recipient}")
                outgoing.append((MessageEnvelope(sender=v, recipient=recipient, payload=dict(payload)), send_round))
        outgoing.sort(key=lambda e: (e[0].sender, e[0].recipient))
        self._pending = outgoing

    def _refresh_aggregate(self) -> None:
        if self.program.aggregator is not None:
            self._aggregate = dict(self.program.aggregator(self.graph, self._states))
        else:
            self._aggregate = None

    def _terminated(self) -> bool:
        rule = self.program.termination_rule
        if rule is None:
            return False
        return bool(rule(self._prev_states, self._states, self._round))


def run(graph: Graph, program: VertexProgram, backend, cfg: EngineConfig = EngineConfig()) -> RunResult:
    """Convenience wrapper: build an Engine and run it to completion."""
    return Engine(graph, program, backend, cfg).run()


# -- trace rendering -------------------------------------------------------------


def _state_line(node: int, state: Mapping[str, Any]) -> str:
    body = " ".join(f"{i}. {k}: {render_value(v)}" for i, (k, v) in enumerate(state.items(), 1))
    return f"{node}: State: {body}"


def _message_line(envelope: MessageEnvelope) -> str:
    body = " ".join(
        f"{i}. {k}: {render_value(v)}" for i, (k, v) in enumerate(envelope.payload.items(), 1)
    )
    return f"Node {envelope.sender} Send Message to Node {envelope.recipient}: {body}"


def render_trace_lines(result: RunResult) -> list[str]:
    """Line-oriented round log in the style the agents' master prints."""
    if result.trace is None:
        return []
    lines: list[str] = []
    sends_by_round: dict[int, list[MessageEnvelope]] = {}
    for round_trace in result.trace:
        for record in round_trace.deliveries:
            sends_by_round.setdefault(record.sent_round, []).append(record.envelope)
    for round_trace in result.trace:
        if round_trace.superstep == 0:
            lines.append("Initialization:")
            for node, _, state in round_trace.state_changes:
                lines.append(_state_line(node, state))
        else:
            for node, _, state in round_trace.state_changes:
                lines.append(_state_line(node, state))
        for envelope in sends_by_round.get(round_trace.superstep, []):
            lines.append(_message_line(envelope))
    if result.termination is Termination.CONVERGED:
        lines.append("All agents' state unchanged, terminating early...")
    elif result.termination is Termination.TERMINATION_RULE_MET:
        lines.append("Termination condition met, stopping...")
    else:
        lines.append("Maximum iterations reached, stopping...")
    return lines


def render_final_states(result: RunResult) -> list[str]:
    return [
        "Node: {0}  State: {1}".format(
            v, " ".join(f"{i}. {k}: {render_value(x)}" for i, (k, x) in enumerate(s.items(), 1))
        )
        for v, s in sorted(result.final_states.items())
    ]
