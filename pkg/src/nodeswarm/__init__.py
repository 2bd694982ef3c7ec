"""nodeswarm: vertex-centric graph reasoning by synchronized message passing.

A graph problem stated in natural-language edge-list form is decomposed
into per-node tasks carried out by one agent per node. The agents
exchange messages in synchronized rounds until the algorithm terminates,
and a master layer summarizes their final states into an answer.
"""
from .backends import DeterministicBackend, LLMBackend, ReplayBackend, TranscriptStore
from .engine import Engine, EngineConfig, MessageEnvelope, RunResult, Termination, run
from .graph import Edge, Graph, parse_graph
from .orchestrator import Answer, AnswerKind, ProblemSpec, Task, classify_problem, solve, summarize
from .program import NodeContext, VertexProgram, serialize_template

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "AnswerKind",
    "DeterministicBackend",
    "Edge",
    "Engine",
    "EngineConfig",
    "Graph",
    "LLMBackend",
    "MessageEnvelope",
    "NodeContext",
    "ProblemSpec",
    "ReplayBackend",
    "RunResult",
    "Task",
    "Termination",
    "TranscriptStore",
    "VertexProgram",
    "classify_problem",
    "parse_graph",
    "run",
    "serialize_template",
    "solve",
    "summarize",
]
