"""Exception hierarchy for the whole package."""
from __future__ import annotations


class NodeswarmError(Exception):
    """Base class for all package errors."""


# --- graph parsing ---

class GraphParseError(NodeswarmError):
    pass


class MissingNodeClauseError(GraphParseError):
    """The problem text declares no node count or node range."""


class MalformedTupleError(GraphParseError):
    """An edge tuple has the wrong arity or a non-integer entry."""


class EndpointOutOfRangeError(GraphParseError):
    """An edge references a node outside the declared range."""


class UnknownNodeError(NodeswarmError):
    pass


# --- engine ---

class SchemaViolationError(NodeswarmError):
    """A backend produced a state or message that does not match the schema."""


class BackendFailureError(NodeswarmError):
    """An agent executor failed after exhausting its retries."""


# --- vertex programs ---

class ProgramBuildError(NodeswarmError):
    pass


class NegativeWeightError(ProgramBuildError):
    pass


class NegativeCapacityError(ProgramBuildError):
    pass


class SourceEqualsSinkError(ProgramBuildError):
    pass


class MissingNodeWeightError(ProgramBuildError):
    """A node-weighted task was given a graph without weights for every node."""


# --- orchestrator ---

class ClassificationError(NodeswarmError):
    pass


class NoMatchingTemplateError(ClassificationError):
    """No algorithm template scored above the retrieval threshold."""


class AmbiguousTaskError(ClassificationError):
    """Two templates tied for the top retrieval score."""


class MissingParameterError(ClassificationError):
    """The task requires a parameter the problem text does not provide."""


class InconsistentStatesError(NodeswarmError):
    """Final states cannot be summarized into an answer."""


class NotADAGError(InconsistentStatesError):
    """Topological layering left nodes unresolved: the graph has a cycle."""


class PipelineStageError(NodeswarmError):
    """Wraps an error from one stage of the solve pipeline."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


# --- agent backends ---

class ParseFailureError(NodeswarmError):
    """An agent reply could not be parsed after all retries."""


class EndpointError(NodeswarmError):
    """HTTP or transport failure talking to the chat-completion endpoint."""


class ReplayMissError(NodeswarmError):
    """No recorded transcript exists for the requested exchange."""


class StoreCorruptError(NodeswarmError):
    pass


# --- evaluation ---

class SizeOutOfRangeError(NodeswarmError):
    """Requested instance size is outside the task's node range."""
