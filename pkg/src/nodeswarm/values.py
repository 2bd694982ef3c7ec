"""Value model shared by agent states and messages.

Every state and message field holds one of a small set of value kinds.
Schemas map field names to kind names; the engine validates values against
the schema at every superstep boundary.
"""
from __future__ import annotations

import ast
import math
from typing import Any, Mapping

from .errors import SchemaViolationError

# Kind names usable in state/message schemas.
KIND_INT = "int"            # exact integer (never a bool)
KIND_NUMBER = "number"      # int or finite float; may be UNREACHABLE
KIND_BOOL = "bool"
KIND_NODE = "node"          # non-negative integer node id
KIND_NODE_LIST = "node_list"    # tuple of node ids
KIND_PAIR_LIST = "pair_list"    # tuple of (node id, number) pairs
KIND_TEXT = "text"

ALL_KINDS = frozenset({
    KIND_INT, KIND_NUMBER, KIND_BOOL, KIND_NODE,
    KIND_NODE_LIST, KIND_PAIR_LIST, KIND_TEXT,
})

FLOAT_TOLERANCE = 1e-12


class Unreachable:
    """Saturating infinity used for distances and unset numeric fields.

    Adding any number to it yields itself, and it compares greater than
    every finite number, so ``min()`` and ``+`` work without special cases.
    Rendered as ``\\infinity`` in traces and agent prompts.
    """

    _instance = None
    __slots__ = ()

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "\\infinity"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


UNREACHABLE = Unreachable()


def is_unreachable(value: Any) -> bool:
    return value is UNREACHABLE


def conforms(kind: str, value: Any) -> bool:
    """Check a single value against a kind name. No coercion."""
    if kind == KIND_INT:
        return type(value) is int
    if kind == KIND_NUMBER:
        if value is UNREACHABLE:
            return True
        if type(value) is int:
            return True
        return type(value) is float and math.isfinite(value)
    if kind == KIND_BOOL:
        return type(value) is bool
    if kind == KIND_NODE:
        return type(value) is int and value >= 0
    if kind == KIND_NODE_LIST:
        return type(value) is tuple and all(type(v) is int and v >= 0 for v in value)
    if kind == KIND_PAIR_LIST:
        return type(value) is tuple and all(
            type(p) is tuple and len(p) == 2
            and type(p[0]) is int and p[0] >= 0
            and type(p[1]) in (int, float)
            for p in value
        )
    if kind == KIND_TEXT:
        return type(value) is str
    raise ValueError(f"unknown value kind {kind!r}")


def validate_fields(schema: Mapping[str, str], fields: Mapping[str, Any], where: str) -> None:
    """Raise SchemaViolationError unless ``fields`` matches ``schema`` exactly."""
    if set(fields) != set(schema):
        raise SchemaViolationError(
            f"{where}: fields {sorted(fields)} do not match schema {sorted(schema)}"
        )
    for name, kind in schema.items():
        if not conforms(kind, fields[name]):
            raise SchemaViolationError(
                f"{where}: field {name!r} = {fields[name]!r} does not conform to kind {kind!r}"
            )


def values_equal(a: Any, b: Any, tol: float = FLOAT_TOLERANCE) -> bool:
    """Structural equality; numeric fields compare within absolute tolerance."""
    if a is UNREACHABLE or b is UNREACHABLE:
        return a is b
    if type(a) is bool or type(b) is bool:
        return a is b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        if type(a) is int and type(b) is int:
            return a == b
        return abs(a - b) <= tol
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(values_equal(x, y, tol) for x, y in zip(a, b))
    return a == b


def fields_equal(a: Mapping[str, Any], b: Mapping[str, Any], tol: float = FLOAT_TOLERANCE) -> bool:
    if set(a) != set(b):
        return False
    return all(values_equal(a[k], b[k], tol) for k in a)


def render_value(value: Any) -> str:
    """Render a value for traces and agent prompts."""
    if value is UNREACHABLE:
        return "\\infinity"
    if type(value) is bool:
        return "True" if value else "False"
    if type(value) is float:
        return repr(value)
    if type(value) is int:
        return str(value)
    if type(value) is str:
        return value
    if type(value) is tuple:
        return "[" + ", ".join(render_value(v) for v in value) + "]"
    raise ValueError(f"cannot render {value!r}")


_INFINITY_WORDS = {"\\infinity", "infinity", "inf", "unreachable"}


def parse_value(kind: str, text: str):
    """Parse rendered text back into a value of the given kind.

    Raises ValueError on anything that does not parse cleanly; callers
    translate that into a reply-parse failure.
    """
    text = text.strip()
    if kind == KIND_INT:
        return int(text)
    if kind == KIND_NUMBER:
        if text.lower() in _INFINITY_WORDS:
            return UNREACHABLE
        value = float(text)
        return int(text) if float(int(value)) == value and "." not in text and "e" not in text.lower() else value
    if kind == KIND_BOOL:
        low = text.lower()
        if low in ("true", "yes"):
            return True
        if low in ("false", "no"):
            return False
        raise ValueError(f"not a boolean: {text!r}")
    if kind == KIND_NODE:
        node = int(text)
        if node < 0:
            raise ValueError(f"negative node id: {text!r}")
        return node
    if kind == KIND_NODE_LIST:
        inner = text.strip("[]").strip()
        if not inner:
            return ()
        return tuple(int(part) for part in inner.split(","))
    if kind == KIND_PAIR_LIST:
        parsed = ast.literal_eval(text)
        return tuple((int(u), w) for u, w in parsed)
    if kind == KIND_TEXT:
        return text
    raise ValueError(f"unknown value kind {kind!r}")
