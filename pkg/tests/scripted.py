"""A scripted chat transport: answers agent prompts by running the rules.

This stands in for a remote model in tests. It parses the structured
input block out of each prompt, applies the program's own rule functions,
and formats the reply exactly as an agent is asked to, which exercises
prompt rendering and reply parsing end to end with zero network access.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Mapping

from nodeswarm.backends import format_messages_block, format_state_block
from nodeswarm.graph import Graph
from nodeswarm.program import NodeContext, VertexProgram
from nodeswarm.values import parse_value

_PHASE_RE = re.compile(r"^### (Initialization|Update|Send)$", re.MULTILINE)
_NODE_RE = re.compile(r"^Node Id: (\d+)$", re.MULTILINE)
_ROUND_RE = re.compile(r"^Round: (\d+)$", re.MULTILINE)
_CHANGED_RE = re.compile(r"^State changed this round: (True|False)$", re.MULTILINE)
_FIELD_RE = re.compile(r"^\s*\d+\.\s*(\w+)\s*:\s*(.+?)\s*$")
_SENDER_RE = re.compile(r"^Message from Node (\d+):$")


@dataclass(frozen=True)
class _Envelope:
    sender: int
    recipient: int
    payload: Mapping[str, Any]


def _collect_fields(lines, start, schema):
    fields = {}
    i = start
    while i < len(lines):
        m = _FIELD_RE.match(lines[i])
        if not m or m.group(1) not in schema:
            break
        fields[m.group(1)] = parse_value(schema[m.group(1)], m.group(2))
        i += 1
    return fields, i


def parse_agent_prompt(prompt: str, program: VertexProgram) -> dict:
    """Recover the phase inputs embedded in a rendered prompt."""
    prompt = prompt.split("## Output format")[0]
    phase = {"Initialization": "init", "Update": "update", "Send": "send"}[
        _PHASE_RE.search(prompt).group(1)
    ]
    node_id = int(_NODE_RE.search(prompt).group(1))
    round_no = int(_ROUND_RE.search(prompt).group(1))
    changed_m = _CHANGED_RE.search(prompt)
    changed = changed_m.group(1) == "True" if changed_m else True

    lines = prompt.splitlines()
    state = None
    prev_state = None
    inbox = []
    aggregate = None
    i = 0
    while i < len(lines):
        line = lines[i]
        if line == "State:":
            state, i = _collect_fields(lines, i + 1, program.state_schema)
            continue
        if line == "Previous State:":
            if i + 1 < len(lines) and lines[i + 1] == "(none)":
                prev_state = None
                i += 2
                continue
            prev_state, i = _collect_fields(lines, i + 1, program.state_schema)
            continue
        sender_m = _SENDER_RE.match(line)
        if sender_m:
            payload, i = _collect_fields(lines, i + 1, program.message_schema)
            inbox.append(_Envelope(sender=int(sender_m.group(1)), recipient=node_id, payload=payload))
            continue
        if line == "Shared values:":
            aggregate = {}
            i += 1
            while i < len(lines):
                m = _FIELD_RE.match(lines[i])
                if not m:
                    break
                aggregate[m.group(1)] = float(m.group(2))
                i += 1
            continue
        i += 1
    return {
        "phase": phase,
        "node_id": node_id,
        "round": round_no,
        "changed": changed,
        "state": state,
        "prev_state": prev_state,
        "inbox": tuple(inbox),
        "aggregate": aggregate,
    }


def make_scripted_transport(graph: Graph, program: VertexProgram, mangle=None):
    """Build a transport callable answering prompts via the program rules.

    ``mangle`` optionally rewrites the reply text (to test retry paths).
    """
    calls = {"count": 0}

    def transport(payload: dict) -> str:
        calls["count"] += 1
        prompt = payload["messages"][0]["content"]
        request = parse_agent_prompt(prompt, program)
        v = request["node_id"]
        ctx = NodeContext(
            node_id=v,
            neighbors=graph.neighbors(v),
            in_neighbors=graph.in_neighbors(v),
            node_count=graph.node_count,
            directed=graph.directed,
            params=dict(program.params),
            feature=graph.feature_of(v),
        )
        if request["phase"] == "init":
            reply = "## Output\n" + format_state_block(program.init_rule(ctx))
        elif request["phase"] == "update":
            state = program.update_rule(
                ctx, request["state"], request["inbox"], request["round"], request["aggregate"]
            )
            reply = "## Output\n" + format_state_block(state)
        else:
            messages = program.send_rule(
                ctx, request["state"], request["prev_state"], request["round"], request["changed"]
            )
            reply = "## Output\n" + format_messages_block(messages)
        if mangle is not None:
            reply = mangle(reply, calls["count"])
        return reply

    transport.calls = calls
    return transport
