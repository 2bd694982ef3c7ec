"""The master pipeline: classify, parameterize, execute, summarize.

A problem arrives as plain text. The classifier scores every algorithm
template against the text, extracts the task parameters, and infers
whether the graph is directed and weighted. The graph is parsed, the
matching vertex program (or master-coordinated solver) runs, and the
final states are aggregated into a natural-language answer whose
structured value can be recovered from the narrative.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Any, Mapping

from . import programs
from .backends import AgentBackend, DeterministicBackend, LLMBackend, ReplayBackend, problem_key_for
from .engine import Engine, EngineConfig, RunResult
from .errors import (
    AmbiguousTaskError,
    InconsistentStatesError,
    MissingParameterError,
    NoMatchingTemplateError,
    NodeswarmError,
    NotADAGError,
    PipelineStageError,
)
from .graph import Graph, parse_graph
from .program import MasterCoordinated
from .programs.bipartite import UNSET as COLOR_UNSET
from .programs.hamilton import HEURISTIC_NOTE
from .values import UNREACHABLE, render_value


class Task(enum.Enum):
    CYCLE = "cycle"
    CONNECTIVITY = "connectivity"
    BIPARTITE = "bipartite"
    TOPO_SORT = "topological_sort"
    SHORTEST_PATH = "shortest_path"
    TRIANGLE_SUM = "triangle_sum"
    MAX_FLOW = "max_flow"
    PAGERANK = "pagerank"
    HAMILTON = "hamilton_heuristic"


class AnswerKind(enum.Enum):
    BOOLEAN = "boolean"
    NUMBER = "number"
    ORDERING = "ordering"
    DISTANCE_MAP = "distance_map"
    RANKING = "ranking"
    NO_SOLUTION = "no_solution"


@dataclass(frozen=True)
class ProblemSpec:
    task: Task
    graph_text: str
    directed: bool
    weighted: bool
    params: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Answer:
    kind: AnswerKind
    value: Any
    narrative: str


@dataclass
class Solution:
    """Full pipeline output: the answer plus the run it came from."""

    answer: Answer
    spec: ProblemSpec
    result: RunResult
    graph: Graph


# ---------------------------------------------------------------------------
# classification: lexical template retrieval
# ---------------------------------------------------------------------------

# Weighted scoring phrases per template. The notation preamble every problem
# carries ("(i,j) means that ... are connected ...") is stripped before
# scoring so its vocabulary cannot vote.
_SCORE_TABLE: dict[Task, tuple[tuple[str, int], ...]] = {
    Task.CYCLE: (("contains any cycles", 5), ("cycle", 4),),
    Task.CONNECTIVITY: (
        ("connected via a path", 6),
        ("path between", 4),
        ("are connected", 4),
        ("connectivity", 4),
        ("two nodes", 1),
    ),
    Task.BIPARTITE: (("bipartite", 6),),
    Task.TOPO_SORT: (
        ("topological", 6),
        ("topology sorting", 6),
        ("topological ordering", 3),
    ),
    Task.SHORTEST_PATH: (("shortest", 6), ("shortest distance", 2), ("shortest path", 2)),
    Task.TRIANGLE_SUM: (
        ("triangle", 5),
        ("connected triplet", 6),
        ("three interconnected nodes", 6),
        ("three nodes that are connected", 5),
        ("maximum sum of weights", 4),
        ("maximum sum of the weights", 4),
    ),
    Task.MAX_FLOW: (("maximum flow", 6), ("max flow", 6), ("capacity", 2)),
    Task.PAGERANK: (
        ("pagerank", 6),
        ("page rank", 6),
        ("importance", 4),
        ("important", 3),
        ("webpage", 2),
        ("web page", 2),
        ("ranking", 2),
    ),
    Task.HAMILTON: (
        ("hamiltonian", 6),
        ("hamilton", 6),
        ("visits each vertex exactly once", 4),
    ),
}

RETRIEVAL_THRESHOLD = 3
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.?!])")


def _strip_notation_sentences(text: str) -> str:
    sentences = _SENTENCE_SPLIT_RE.split(text)
    return " ".join(s for s in sentences if "means that" not in s)


def _score(text: str) -> dict[Task, int]:
    stripped = _strip_notation_sentences(text.lower())
    scores = {}
    for task, phrases in _SCORE_TABLE.items():
        scores[task] = sum(weight for phrase, weight in phrases if phrase in stripped)
    return scores


_PAIR_PATTERNS = (
    re.compile(r"between\s+node\s+(\d+)\s+and\s+node\s+(\d+)", re.IGNORECASE),
    re.compile(r"two\s+nodes\s+(\d+)\s+and\s+(\d+)", re.IGNORECASE),
    re.compile(r"nodes?\s+(\d+)\s+and\s+(?:node\s+)?(\d+)", re.IGNORECASE),
)
_FLOW_PATTERN = re.compile(r"from\s+node\s+(\d+)\s+to\s+node\s+(\d+)", re.IGNORECASE)
_SOURCE_PATTERN = re.compile(r"from\s+node\s+(\d+)", re.IGNORECASE)
_TOP_K_PATTERN = re.compile(r"top[-\s](\d+)", re.IGNORECASE)
_WEIGHTED_TUPLE_RE = re.compile(r"\(\s*\d+\s*,\s*\d+\s*,\s*-?\d+(?:\.\d+)?\s*\)")


def _extract_pair(text: str) -> tuple[int, int] | None:
    for pattern in _PAIR_PATTERNS:
        m = pattern.search(text)
        if m:
            return int(m.group(1)), int(m.group(2))
    return None


def _infer_flags(task: Task, text: str) -> tuple[bool, bool]:
    low = text.lower()
    if "undirected" in low:
        directed = False
    elif "directed" in low:
        directed = True
    else:
        directed = task in (Task.TOPO_SORT, Task.MAX_FLOW, Task.PAGERANK)
    weighted = bool(
        _WEIGHTED_TUPLE_RE.search(low)
        or "with weight" in low
        or "with capacity" in low
        or "(i,j,k)" in low
    )
    return directed, weighted


def rank_tasks(text: str) -> list[tuple[Task, int]]:
    """All templates ranked by lexical score, best first."""
    scores = _score(text)
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0].value))


def classify_problem(text: str, task_hint: str | None = None) -> ProblemSpec:
    """Pick the best-matching template and extract its parameters.

    A ``task_hint`` (a task enum value) bypasses the lexical retrieval,
    keeping parameter extraction and flag inference.
    """
    if task_hint is not None:
        best_task = Task(task_hint)
    else:
        ranked = rank_tasks(text)
        best_task, best_score = ranked[0]
        if best_score < RETRIEVAL_THRESHOLD:
            raise NoMatchingTemplateError(
                f"no template scored above {RETRIEVAL_THRESHOLD} (best: {best_task.value}={best_score})"
            )
        if ranked[1][1] == best_score:
            raise AmbiguousTaskError(
                f"templates {best_task.value} and {ranked[1][0].value} tie at score {best_score}"
            )

    params: dict[str, Any] = {}
    if best_task is Task.CONNECTIVITY:
        pair = _extract_pair(text)
        if pair is None:
            raise MissingParameterError("connectivity requires the two query nodes")
        params["source"], params["target"] = pair
    elif best_task is Task.SHORTEST_PATH:
        pair = _extract_pair(text)
        m = _SOURCE_PATTERN.search(text)
        if pair is not None and _FLOW_PATTERN.search(text):
            params["source"], params["target"] = pair
        elif m:
            params["source"] = int(m.group(1))
        elif pair is not None:
            params["source"], params["target"] = pair
        else:
            raise MissingParameterError("shortest path requires a source node")
    elif best_task is Task.MAX_FLOW:
        m = _FLOW_PATTERN.search(text)
        if not m:
            raise MissingParameterError("max flow requires source and sink nodes")
        params["source"], params["sink"] = int(m.group(1)), int(m.group(2))
    elif best_task is Task.PAGERANK:
        m = _TOP_K_PATTERN.search(text)
        if m:
            params["top_k"] = int(m.group(1))

    directed, weighted = _infer_flags(best_task, text)
    return ProblemSpec(
        task=best_task, graph_text=text, directed=directed, weighted=weighted, params=params,
    )


# ---------------------------------------------------------------------------
# solver construction and execution
# ---------------------------------------------------------------------------


def build_solver(spec: ProblemSpec, graph: Graph):
    """Return a VertexProgram or a MasterCoordinated solver for the task."""
    task = spec.task
    if task is Task.SHORTEST_PATH:
        return programs.shortest_path_program(source=spec.params["source"], graph=graph)
    if task is Task.CONNECTIVITY:
        return programs.connectivity_program(
            source=spec.params["source"], target=spec.params["target"], graph=graph
        )
    if task is Task.CYCLE:
        return programs.cycle_detection_program()
    if task is Task.BIPARTITE:
        return programs.BipartiteSolver()
    if task is Task.TOPO_SORT:
        return programs.topological_sort_program()
    if task is Task.TRIANGLE_SUM:
        return programs.triangle_sum_program(graph=graph)
    if task is Task.MAX_FLOW:
        return programs.MaxFlowSolver(source=spec.params["source"], sink=spec.params["sink"])
    if task is Task.PAGERANK:
        return programs.pagerank_program(
            damping=spec.params.get("damping", 0.85),
            epsilon=spec.params.get("epsilon", 1e-6),
        )
    if task is Task.HAMILTON:
        return programs.hamilton_heuristic_program(seed=min(graph.node_ids))
    raise ValueError(f"unhandled task {task}")


def execute_solver(solver, graph: Graph, backend: AgentBackend, cfg: EngineConfig) -> RunResult:
    if isinstance(solver, MasterCoordinated):
        return solver.run(graph, backend, cfg)
    return Engine(graph, solver, backend, cfg).run()


def solve_detailed(
    text: str,
    backend: AgentBackend | None = None,
    cfg: EngineConfig = EngineConfig(),
    directed: bool | None = None,
    weighted: bool | None = None,
    task_hint: str | None = None,
) -> Solution:
    """Run the full pipeline; stage failures carry the stage name."""
    backend = backend or DeterministicBackend()
    if isinstance(backend, (LLMBackend, ReplayBackend)):
        backend.problem_key = problem_key_for(text)

    spec = _stage("classify", classify_problem, text, task_hint)
    if directed is not None or weighted is not None:
        spec = ProblemSpec(
            task=spec.task,
            graph_text=spec.graph_text,
            directed=spec.directed if directed is None else directed,
            weighted=spec.weighted if weighted is None else weighted,
            params=spec.params,
        )
    graph = _stage("parse", parse_graph, spec.graph_text, spec.directed, spec.weighted)
    solver = _stage("build", build_solver, spec, graph)
    result = _stage("run", execute_solver, solver, graph, backend, cfg)
    answer = _stage("summarize", summarize, result, spec)
    return Solution(answer=answer, spec=spec, result=result, graph=graph)


def solve(text: str, backend: AgentBackend | None = None, cfg: EngineConfig = EngineConfig(),
          directed: bool | None = None, weighted: bool | None = None,
          task_hint: str | None = None) -> Answer:
    return solve_detailed(text, backend=backend, cfg=cfg, directed=directed,
                          weighted=weighted, task_hint=task_hint).answer


def _stage(name, fn, *args):
    try:
        return fn(*args)
    except NodeswarmError as exc:
        raise PipelineStageError(name, exc) from exc


# ---------------------------------------------------------------------------
# template retrieval material for externally driven algorithm composition
# ---------------------------------------------------------------------------

PARADIGM_DESCRIPTION = """\
Algorithms are written for one agent per graph node and executed in
synchronized rounds. Every algorithm names six components:
State, the fields each node maintains; Message, the fields nodes exchange;
Initialization, how states are seeded; Send, which messages a node emits to
its neighbors from its current state; Update, how a node folds received
messages into its state; and Termination, when the rounds stop. Messages
sent in one round are delivered at the start of the next, and only between
graph neighbors.
"""

DEFAULT_RETRIEVAL_K = 3

# library entry backing each task's template document
_TEMPLATE_NAME = {
    Task.CYCLE: "cycle_detection",
    Task.MAX_FLOW: "residual_bfs",
}


def composition_prompt(text: str, k: int = DEFAULT_RETRIEVAL_K) -> str:
    """Prompt material for composing a new algorithm from the closest templates.

    Used when no library template fits and an external model is asked to
    design one: the paradigm description plus the k best-scoring templates.
    """
    from . import programs
    from .program import serialize_template

    ranked = rank_tasks(text)[:k]
    blocks = [PARADIGM_DESCRIPTION]
    for task, score in ranked:
        program = programs.LIBRARY[_TEMPLATE_NAME.get(task, task.value)]()
        blocks.append(f"--- template: {task.value} (score {score}) ---")
        blocks.append(serialize_template(program))
    blocks.append("--- problem ---")
    blocks.append(text)
    blocks.append(
        "Design a distributed algorithm for this problem in the same "
        "six-component layout as the templates above."
    )
    return "\n".join(blocks)


# ---------------------------------------------------------------------------
# summarization: final states -> natural-language answer
# ---------------------------------------------------------------------------


def summarize(result: RunResult, spec: ProblemSpec) -> Answer:
    states = result.final_states
    task = spec.task
    if task is Task.CYCLE:
        has_cycle = any(s["active"] for s in states.values())
        narrative = (
            "Yes, the graph contains a cycle." if has_cycle else "No, the graph contains no cycle."
        )
        return Answer(AnswerKind.BOOLEAN, has_cycle, narrative)

    if task is Task.CONNECTIVITY:
        source, target = spec.params["source"], spec.params["target"]
        connected = states[target]["reached"]
        narrative = (
            f"Yes, node {source} and node {target} are connected via a path."
            if connected
            else f"No, node {source} and node {target} are not connected."
        )
        return Answer(AnswerKind.BOOLEAN, connected, narrative)

    if task is Task.BIPARTITE:
        conflict = any(s["conflict"] for s in states.values())
        if any(s["color"] == COLOR_UNSET for s in states.values()):
            raise InconsistentStatesError("bipartite run left uncolored nodes")
        narrative = "No, this graph is not bipartite." if conflict else "Yes, this graph is bipartite."
        return Answer(AnswerKind.BOOLEAN, not conflict, narrative)

    if task is Task.TOPO_SORT:
        unresolved = sorted(v for v, s in states.items() if s["layer"] is UNREACHABLE)
        if unresolved:
            raise NotADAGError(f"nodes {unresolved} never reached in-degree zero; the graph has a cycle")
        order = [v for v, _ in sorted(states.items(), key=lambda kv: (kv[1]["layer"], kv[0]))]
        narrative = "The topological order is: " + ", ".join(str(v) for v in order) + "."
        return Answer(AnswerKind.ORDERING, order, narrative)

    if task is Task.SHORTEST_PATH:
        source = spec.params["source"]
        distances = {v: s["distance"] for v, s in sorted(states.items())}
        body = ", ".join(
            f"Node {v}: {'unreachable' if d is UNREACHABLE else render_value(d)}"
            for v, d in distances.items()
        )
        narrative = f"The shortest distances from node {source} are as follows: {body}."
        return Answer(AnswerKind.DISTANCE_MAP, distances, narrative)

    if task is Task.TRIANGLE_SUM:
        found = [s["best_sum"] for s in states.values() if s["has_triangle"]]
        if not found:
            return Answer(
                AnswerKind.NO_SOLUTION,
                None,
                "No solution: the graph contains no three interconnected nodes.",
            )
        best = max(found)
        narrative = f"The maximum sum of the weights of three interconnected nodes is {render_value(best)}."
        return Answer(AnswerKind.NUMBER, best, narrative)

    if task is Task.MAX_FLOW:
        info = result.master_info or {}
        if "max_flow" not in info:
            raise InconsistentStatesError("max flow run carries no accumulated flow")
        source, sink = spec.params["source"], spec.params["sink"]
        flow = info["max_flow"]
        narrative = f"The maximum flow from node {source} to node {sink} is {render_value(flow)}."
        return Answer(AnswerKind.NUMBER, flow, narrative)

    if task is Task.PAGERANK:
        ranking = sorted(
            ((v, s["rank"]) for v, s in states.items()), key=lambda kv: (-kv[1], kv[0])
        )
        top_k = spec.params.get("top_k")
        lead_ids = [str(v) for v, _ in ranking[: top_k or 3]]
        lead = "The most important nodes are " + ", ".join(lead_ids) + "."
        body = ", ".join(f"Node {v}: {render_value(r)}" for v, r in ranking)
        narrative = f"{lead} Importance ranking: {body}."
        return Answer(AnswerKind.RANKING, ranking, narrative)

    if task is Task.HAMILTON:
        n = len(states)
        longest = max(s["path_length"] for s in states.values())
        exists = longest >= n
        if exists:
            narrative = (
                f"Yes, a path estimate reached all {n} nodes, so a Hamiltonian path "
                f"is assumed to exist ({HEURISTIC_NOTE})."
            )
        else:
            narrative = (
                f"No, the maximum path length found is {longest}, which is less than "
                f"the total number of nodes ({n}), so no Hamiltonian path was found "
                f"({HEURISTIC_NOTE})."
            )
        return Answer(AnswerKind.BOOLEAN, exists, narrative)

    raise ValueError(f"unhandled task {task}")


# ---------------------------------------------------------------------------
# answer narrative round-trip
# ---------------------------------------------------------------------------

_VALUE_PATTERN = r"(unreachable|-?\d+(?:\.\d+)?(?:e[+-]?\d+)?)"
_NODE_PAIR_RE = re.compile(r"Node (\d+): " + _VALUE_PATTERN)
_NUMBER_TAIL_RE = re.compile(r"is " + _VALUE_PATTERN + r"\.?\s*$")
_ORDER_RE = re.compile(r"order is: ([0-9, ]+)\.")


def _parse_scalar(text: str):
    text = text.strip()
    if text == "unreachable":
        return UNREACHABLE
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_answer(kind: AnswerKind, narrative: str):
    """Recover the structured value from an answer narrative."""
    if kind is AnswerKind.BOOLEAN:
        low = narrative.strip().lower()
        if low.startswith("yes"):
            return True
        if low.startswith("no"):
            return False
        raise ValueError(f"boolean narrative must open with Yes/No: {narrative!r}")
    if kind is AnswerKind.NUMBER:
        m = _NUMBER_TAIL_RE.search(narrative)
        if not m:
            raise ValueError(f"no number found in {narrative!r}")
        return _parse_scalar(m.group(1))
    if kind is AnswerKind.ORDERING:
        m = _ORDER_RE.search(narrative)
        if not m:
            raise ValueError(f"no order found in {narrative!r}")
        return [int(part) for part in m.group(1).split(",")]
    if kind is AnswerKind.DISTANCE_MAP:
        return {int(v): _parse_scalar(d) for v, d in _NODE_PAIR_RE.findall(narrative)}
    if kind is AnswerKind.RANKING:
        return [(int(v), _parse_scalar(r)) for v, r in _NODE_PAIR_RE.findall(narrative)]
    if kind is AnswerKind.NO_SOLUTION:
        return None
    raise ValueError(f"unhandled answer kind {kind}")


def answer_to_jsonable(answer: Answer):
    """JSON-safe projection of an answer value."""
    value = answer.value
    if answer.kind is AnswerKind.DISTANCE_MAP:
        value = {str(v): ("unreachable" if d is UNREACHABLE else d) for v, d in value.items()}
    elif answer.kind is AnswerKind.RANKING:
        value = [[v, r] for v, r in value]
    return {"kind": answer.kind.value, "value": value, "narrative": answer.narrative}
