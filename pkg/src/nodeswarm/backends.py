"""Pluggable per-agent executors.

Three modes share one phase interface:

  * DeterministicBackend applies the program's pure rule functions and is
    the reference semantics for every shipped algorithm.
  * LLMBackend renders each phase into a chat prompt (template section plus
    the node's input block), POSTs it to a chat-completion endpoint, and
    parses the labeled ``## Output`` block of the reply.
  * ReplayBackend serves previously recorded exchanges bit-exactly and
    fails on any divergence, enabling offline tests of the LLM path.
"""
from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from .errors import (
    EndpointError,
    ParseFailureError,
    ReplayMissError,
    StoreCorruptError,
)
from .program import NodeContext, VertexProgram
from .values import parse_value, render_value

PHASES = ("init", "update", "send")


@dataclass(frozen=True)
class AgentPromptExchange:
    node_id: int
    phase: str
    round: int
    attempt: int
    prompt: str
    reply: str


class AgentBackend:
    """Base executor: one call per (node, phase)."""

    mode = "abstract"

    def execute_phase(
        self,
        program: VertexProgram,
        ctx: NodeContext,
        phase: str,
        state: Mapping[str, Any] | None = None,
        inbox: Sequence = (),
        round: int = 0,
        changed: bool = True,
        prev_state: Mapping[str, Any] | None = None,
        aggregate: Mapping[str, Any] | None = None,
    ):
        raise NotImplementedError

    def phase_bulk(self, program: VertexProgram, requests: Sequence[dict]) -> list:
        return [self.execute_phase(program, **request) for request in requests]


class DeterministicBackend(AgentBackend):
    """Reference executor: applies the program's rules directly."""

    mode = "deterministic"

    def execute_phase(self, program, ctx, phase, state=None, inbox=(), round=0,
                      changed=True, prev_state=None, aggregate=None):
        if phase == "init":
            return program.init_rule(ctx)
        if phase == "update":
            return program.update_rule(ctx, state, tuple(inbox), round, aggregate)
        if phase == "send":
            return program.send_rule(ctx, state, prev_state, round, changed)
        raise ValueError(f"unknown phase {phase!r}")


# --------------------------------------------------------------------------
# prompt rendering (the wire layout the agents read and write)
# --------------------------------------------------------------------------

_PHASE_SECTIONS = {"init": "Initialization", "update": "Update", "send": "Send"}


def _numbered(fields: Mapping[str, Any]) -> str:
    return "\n".join(f"{i}. {k}: {render_value(v)}" for i, (k, v) in enumerate(fields.items(), 1))


def format_state_block(state: Mapping[str, Any]) -> str:
    return "State:\n" + _numbered(state)


def format_messages_block(messages: Sequence[tuple[int, Mapping[str, Any]]]) -> str:
    if not messages:
        return "No messages."
    parts = [f"Message sent to Node {recipient}:\n{_numbered(payload)}" for recipient, payload in messages]
    return "\n".join(parts)


def render_phase_prompt(program, ctx, phase, state=None, inbox=(), round=0,
                        changed=True, prev_state=None, aggregate=None) -> str:
    """Compose the full prompt for one phase of one node."""
    section_name = _PHASE_SECTIONS[phase]
    lines = [
        f"You are the agent for node {ctx.node_id} in a distributed graph computation.",
        "Apply the algorithm section below to your input, then reply with an",
        "'## Output' block in exactly the format shown.",
        "",
        f"### {section_name}",
        program.section(section_name).rstrip(),
        "",
        "## Input",
        f"Node Id: {ctx.node_id}",
        f"Round: {round}",
    ]
    if phase in ("update", "send") and state is not None:
        lines.append(format_state_block(state))
    if phase == "send":
        lines.append(f"State changed this round: {render_value(changed)}")
        if prev_state is None:
            lines.append("Previous State:\n(none)")
        else:
            lines.append("Previous State:\n" + _numbered(prev_state))
    if phase in ("init", "send"):
        lines.append("Neighbor Information:")
        lines.append("Connected to:")
        for nbr, weight in ctx.neighbors:
            if weight is None:
                lines.append(f"Node {nbr}")
            else:
                lines.append(f"Node {nbr} (edge weight {render_value(weight)})")
    if phase == "update":
        lines.append("Received Messages:")
        if not inbox:
            lines.append("(none)")
        for envelope in inbox:
            lines.append(f"Message from Node {envelope.sender}:")
            lines.append(_numbered(envelope.payload))
        if aggregate:
            lines.append("Shared values:")
            lines.append(_numbered(aggregate))
    lines.append("")
    lines.append("## Output format")
    if phase == "send":
        example = "\n".join(f"{i}. {name}: <{kind}>" for i, (name, kind) in enumerate(program.message_schema.items(), 1))
        lines.append(f"Message sent to Node <id>:\n{example}")
        lines.append("(repeat per message; write 'No messages.' if none)")
    else:
        example = "\n".join(f"{i}. {name}: <{kind}>" for i, (name, kind) in enumerate(program.state_schema.items(), 1))
        lines.append(f"State:\n{example}")
    lines.append("Reply with '## Output' followed only by that block.")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# reply parsing
# --------------------------------------------------------------------------

_FIELD_LINE_RE = re.compile(r"^\s*\d+\.\s*`?([A-Za-z_]\w*)`?\s*:\s*(.+?)\s*$")
_SEND_HEADER_RE = re.compile(r"Message sent to Node\s+(\d+)\s*:?", re.IGNORECASE)
_FENCE_RE = re.compile(r"```(?:\w+)?\n(.*?)```", re.DOTALL)


def _output_block(reply: str) -> str:
    marker = reply.find("## Output")
    if marker >= 0:
        block = reply[marker + len("## Output"):]
        # strip a repeated '## ...' section if the model rambled on
        next_header = block.find("\n## ")
        if next_header >= 0:
            block = block[:next_header]
        return block
    fenced = _FENCE_RE.search(reply)
    if fenced:
        return fenced.group(1)
    raise ParseFailureError("reply contains no '## Output' block")


def _parse_fields(text: str, schema: Mapping[str, str], where: str) -> dict[str, Any]:
    fields: dict[str, Any] = {}
    for line in text.splitlines():
        m = _FIELD_LINE_RE.match(line)
        if not m:
            continue
        name, raw = m.group(1), m.group(2)
        if name not in schema:
            raise ParseFailureError(f"{where}: unknown field {name!r}")
        try:
            fields[name] = parse_value(schema[name], raw)
        except ValueError as exc:
            raise ParseFailureError(f"{where}: field {name!r}: {exc}") from exc
    missing = set(schema) - set(fields)
    if missing:
        raise ParseFailureError(f"{where}: missing fields {sorted(missing)}")
    return fields


def parse_state_reply(program: VertexProgram, reply: str) -> dict[str, Any]:
    return _parse_fields(_output_block(reply), program.state_schema, "state reply")


def parse_send_reply(program: VertexProgram, reply: str) -> list[tuple[int, dict[str, Any]]]:
    block = _output_block(reply)
    if "no messages" in block.lower():
        return []
    headers = list(_SEND_HEADER_RE.finditer(block))
    if not headers:
        stripped = block.strip()
        if not stripped:
            return []
        raise ParseFailureError("send reply has neither message headers nor 'No messages.'")
    messages = []
    for i, m in enumerate(headers):
        end = headers[i + 1].start() if i + 1 < len(headers) else len(block)
        payload = _parse_fields(block[m.end():end], program.message_schema, f"message {i}")
        messages.append((int(m.group(1)), payload))
    return messages


def parse_phase_reply(program: VertexProgram, phase: str, reply: str):
    if phase == "send":
        return parse_send_reply(program, reply)
    return parse_state_reply(program, reply)


# --------------------------------------------------------------------------
# transcript store (record / replay)
# --------------------------------------------------------------------------

class TranscriptStore:
    """One JSON document per exchange, content-addressed by exchange key."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def exchange_key(problem_key: str, node_id: int, round: int, phase: str, attempt: int) -> str:
        raw = f"{problem_key}|{node_id}|{round}|{phase}|{attempt}"
        return hashlib.sha256(raw.encode("utf-8")).hexdigest()

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def save(self, problem_key: str, exchange: AgentPromptExchange) -> None:
        key = self.exchange_key(problem_key, exchange.node_id, exchange.round, exchange.phase, exchange.attempt)
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        document = {
            "problem_key": problem_key,
            "node_id": exchange.node_id,
            "phase": exchange.phase,
            "round": exchange.round,
            "attempt": exchange.attempt,
            "prompt": exchange.prompt,
            "reply": exchange.reply,
        }
        path.write_text(json.dumps(document, indent=2), encoding="utf-8")

    def load(self, problem_key: str, node_id: int, round: int, phase: str, attempt: int) -> dict:
        key = self.exchange_key(problem_key, node_id, round, phase, attempt)
        path = self._path(key)
        if not path.exists():
            raise ReplayMissError(
                f"no transcript for node {node_id} round {round} phase {phase} attempt {attempt}"
            )
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise StoreCorruptError(f"{path}: {exc}") from exc
        for required in ("prompt", "reply"):
            if required not in document:
                raise StoreCorruptError(f"{path}: missing {required!r}")
        return document

    def has(self, problem_key: str, node_id: int, round: int, phase: str, attempt: int) -> bool:
        return self._path(self.exchange_key(problem_key, node_id, round, phase, attempt)).exists()


def problem_key_for(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# --------------------------------------------------------------------------
# LLM-backed executor
# --------------------------------------------------------------------------

_CORRECTION_PREAMBLE = (
    "Your previous reply could not be parsed ({error}).\n"
    "Previous reply:\n{reply}\n\n"
    "Answer again. Respond only with the '## Output' block in the exact format requested.\n\n"
)


def _http_transport(endpoint: str, credential_env: str, timeout: float) -> Callable[[dict], str]:
    import httpx

    url = endpoint.rstrip("/") + "/chat/completions"

    def post(payload: dict) -> str:
        headers = {"Content-Type": "application/json"}
        credential = os.environ.get(credential_env, "")
        if credential:
            headers["Authorization"] = f"Bearer {credential}"
        try:
            response = httpx.post(url, headers=headers, json=payload, timeout=timeout)
            response.raise_for_status()
            data = response.json()
            return data["choices"][0]["message"]["content"]
        except httpx.HTTPError as exc:
            raise EndpointError(f"chat endpoint failure: {exc}") from exc
        except (KeyError, IndexError, ValueError) as exc:
            raise EndpointError(f"malformed chat response: {exc}") from exc

    return post


@dataclass
class LLMBackend(AgentBackend):
    """Executes phases by prompting a chat-completion endpoint.

    ``transport`` maps a request payload to the reply text; the default
    posts JSON over HTTP with a bearer credential taken from the
    environment. Tests may inject a local callable instead.
    """

    endpoint: str = ""
    model_name: str = ""
    temperature: float = 0.0
    max_retries: int = 2
    credential_env: str = "NODESWARM_API_KEY"
    timeout: float = 120.0
    concurrency: int = 4
    store: TranscriptStore | None = None
    problem_key: str = "adhoc"
    transport: Callable[[dict], str] | None = None
    mode: str = field(default="llm", init=False)
    exchanges: list[AgentPromptExchange] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.transport is None:
            if not self.endpoint:
                raise ValueError("LLM mode requires an endpoint (or an injected transport)")
            self.transport = _http_transport(self.endpoint, self.credential_env, self.timeout)

    def _complete(self, prompt: str) -> str:
        payload = {
            "model": self.model_name,
            "temperature": self.temperature,
            "messages": [{"role": "user", "content": prompt}],
        }
        return self.transport(payload)

    def execute_phase(self, program, ctx, phase, state=None, inbox=(), round=0,
                      changed=True, prev_state=None, aggregate=None):
        base_prompt = render_phase_prompt(
            program, ctx, phase, state=state, inbox=inbox, round=round,
            changed=changed, prev_state=prev_state, aggregate=aggregate,
        )
        prompt = base_prompt
        last_error: Exception | None = None
        for attempt in range(self.max_retries + 1):
            reply = self._complete(prompt)
            exchange = AgentPromptExchange(
                node_id=ctx.node_id, phase=phase, round=round,
                attempt=attempt, prompt=prompt, reply=reply,
            )
            self.exchanges.append(exchange)
            if self.store is not None:
                self.store.save(self.problem_key, exchange)
            try:
                return parse_phase_reply(program, phase, reply)
            except ParseFailureError as exc:
                last_error = exc
                prompt = _CORRECTION_PREAMBLE.format(error=exc, reply=reply) + base_prompt
        raise ParseFailureError(
            f"node {ctx.node_id} {phase} round {round}: unparseable after "
            f"{self.max_retries + 1} attempts: {last_error}"
        )

    def phase_bulk(self, program, requests):
        if self.concurrency <= 1 or len(requests) <= 1:
            return [self.execute_phase(program, **request) for request in requests]
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=self.concurrency) as pool:
            futures = [pool.submit(self.execute_phase, program, **request) for request in requests]
            return [f.result() for f in futures]


@dataclass
class ReplayBackend(AgentBackend):
    """Serves recorded exchanges; any divergence from the recording fails."""

    store: TranscriptStore
    problem_key: str = "adhoc"
    max_retries: int = 2
    mode: str = field(default="replay", init=False)

    def execute_phase(self, program, ctx, phase, state=None, inbox=(), round=0,
                      changed=True, prev_state=None, aggregate=None):
        base_prompt = render_phase_prompt(
            program, ctx, phase, state=state, inbox=inbox, round=round,
            changed=changed, prev_state=prev_state, aggregate=aggregate,
        )
        expected_prompt = base_prompt
        last_error: Exception | None = None
        for attempt in range(self.max_retries + 1):
            document = self.store.load(self.problem_key, ctx.node_id, round, phase, attempt)
            if document["prompt"] != expected_prompt:
                raise ReplayMissError(
                    f"node {ctx.node_id} {phase} round {round} attempt {attempt}: "
                    "prompt diverges from the recorded transcript"
                )
            reply = document["reply"]
            try:
                return parse_phase_reply(program, phase, reply)
            except ParseFailureError as exc:
                last_error = exc
                expected_prompt = _CORRECTION_PREAMBLE.format(error=exc, reply=reply) + base_prompt
        raise ParseFailureError(f"replayed exchanges all unparseable: {last_error}")


def make_backend(mode: str, *, endpoint: str = "", model_name: str = "", temperature: float = 0.0,
                 max_retries: int = 2, credential_env: str = "NODESWARM_API_KEY",
                 store_path: str | None = None, problem_key: str = "adhoc",
                 concurrency: int = 4) -> AgentBackend:
    """Factory used by the CLI and orchestrator."""
    if mode == "deterministic":
        return DeterministicBackend()
    if mode == "llm":
        store = TranscriptStore(store_path) if store_path else None
        return LLMBackend(
            endpoint=endpoint, model_name=model_name, temperature=temperature,
            max_retries=max_retries, credential_env=credential_env,
            store=store, problem_key=problem_key, concurrency=concurrency,
        )
    if mode == "replay":
        if not store_path:
            raise ValueError("replay mode requires a transcript store path")
        return ReplayBackend(store=TranscriptStore(store_path), problem_key=problem_key,
                             max_retries=max_retries)
    raise ValueError(f"unknown backend mode {mode!r}")
