"""Constraint graphs: structure, formula trees, and validation.

A constraint graph bundles three edge families. Flow edges relate two
activities through an object type with a causal / concur / choice / skip
label and a threshold in [0, 1]; object edges demand an involvement
cardinality (0..0, 1..1, 1..*, 2..*) of a type in an activity, again against
a threshold; performance edges attach a boolean formula over performance
measures to an activity. A graph is *violated* by a log when every edge
condition holds at once (see :mod:`ocmon.engine`).

Graphs are value objects: equality is structural and edge order never
matters. :func:`validate_graph` reports invariant breaches as diagnostics
rather than raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Union

from .metrics import MeasureKey

COMPARATORS = ("<", "<=", "=", ">=", ">")

EQUALITY_TOLERANCE = 1e-9


class FlowLabel(str, Enum):
    CAUSAL = "causal"
    CONCUR = "concur"
    CHOICE = "choice"
    SKIP = "skip"


class ObjLabel(str, Enum):
    ZERO = "0..0"
    EXACTLY_ONE = "1..1"
    AT_LEAST_ONE = "1..*"
    AT_LEAST_TWO = "2..*"


@dataclass(frozen=True)
class FlowEdge:
    """source --[otype, label, threshold]--> target.

    Skip edges are reflexive: source and target must coincide.
    """

    source: str
    otype: str
    target: str
    label: FlowLabel
    threshold: float


@dataclass(frozen=True)
class ObjEdge:
    """Involvement demand of ``otype`` in ``activity`` at a threshold."""

    otype: str
    activity: str
    label: ObjLabel
    threshold: float


# -- formulas ---------------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    """Leaf comparing one measure against a numeric literal."""

    measure: MeasureKey
    op: str
    value: float

    def __post_init__(self):
        if self.op not in COMPARATORS:
            raise ValueError(f"comparator must be one of {COMPARATORS}, got {self.op!r}")


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    operand: "Formula"


Formula = Union[Comparison, And, Or, Not]


def formula_measures(formula: Formula) -> frozenset[MeasureKey]:
    """All measure keys referenced anywhere in the formula."""
    if isinstance(formula, Comparison):
        return frozenset({formula.measure})
    if isinstance(formula, Not):
        return formula_measures(formula.operand)
    return formula_measures(formula.left) | formula_measures(formula.right)


def evaluate_formula(formula: Formula, resolve) -> bool:
    """Evaluate with ``resolve(MeasureKey) -> float | None``.

    A leaf whose measure resolves to ``None`` (undefined on this log) is
    false; connectives have standard boolean semantics. Equality of floats
    is checked within 1e-9.
    """
    if isinstance(formula, Comparison):
        value = resolve(formula.measure)
        if value is None:
            return False
        if formula.op == "<":
            return value < formula.value
        if formula.op == "<=":
            return value <= formula.value
        if formula.op == "=":
            return abs(value - formula.value) <= EQUALITY_TOLERANCE
        if formula.op == ">=":
            return value >= formula.value
        return value > formula.value
    if isinstance(formula, Not):
        return not evaluate_formula(formula.operand, resolve)
    if isinstance(formula, And):
        return evaluate_formula(formula.left, resolve) and evaluate_formula(
            formula.right, resolve
        )
    return evaluate_formula(formula.left, resolve) or evaluate_formula(
        formula.right, resolve
    )


_PRECEDENCE = {Or: 1, And: 2, Not: 3, Comparison: 4}


def format_number(value: float) -> str:
    """Shortest decimal text that parses back to the same float."""
    if math.isfinite(value) and value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def formula_text(formula: Formula) -> str:
    """Canonical text form; :func:`ocmon.dsl.parse` reads it back."""
    return _render(formula, 0)


def _render(node: Formula, minimum: int) -> str:
    precedence = _PRECEDENCE[type(node)]
    if isinstance(node, Comparison):
        text = f"{node.measure} {node.op} {format_number(node.value)}"
    elif isinstance(node, Not):
        text = f"not {_render(node.operand, precedence)}"
    elif isinstance(node, And):
        text = f"{_render(node.left, precedence)} and {_render(node.right, precedence + 1)}"
    else:
        text = f"{_render(node.left, precedence)} or {_render(node.right, precedence + 1)}"
    if precedence < minimum:
        return f"({text})"
    return text


@dataclass(frozen=True)
class PerfEdge:
    """A formula that must hold for the given activity."""

    formula: Formula
    activity: str


Edge = Union[FlowEdge, ObjEdge, PerfEdge]


@dataclass(frozen=True)
class ConstraintGraph:
    """Named set of flow, object involvement, and performance edges."""

    name: str
    flow_edges: frozenset[FlowEdge] = field(default_factory=frozenset)
    obj_edges: frozenset[ObjEdge] = field(default_factory=frozenset)
    perf_edges: frozenset[PerfEdge] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "flow_edges", frozenset(self.flow_edges))
        object.__setattr__(self, "obj_edges", frozenset(self.obj_edges))
        object.__setattr__(self, "perf_edges", frozenset(self.perf_edges))


@dataclass(frozen=True)
class Diagnostic:
    """One structural finding of :func:`validate_graph`."""

    code: str
    message: str
    edge: Edge | None = None


def validate_graph(graph: ConstraintGraph) -> list[Diagnostic]:
    """Check all structural invariants; an empty list means the graph is valid.

    Findings: ``EmptyGraph`` (no edges at all), ``SkipEndpointMismatch``
    (skip edge whose endpoints differ), ``ThresholdOutOfRange`` (threshold
    outside [0, 1]).
    """
    diagnostics = []
    if not (graph.flow_edges or graph.obj_edges or graph.perf_edges):
        diagnostics.append(
            Diagnostic("EmptyGraph", f"constraint {graph.name!r} has no edges")
        )
    for edge in sorted(graph.flow_edges, key=flow_key):
        if edge.label is FlowLabel.SKIP and edge.source != edge.target:
            diagnostics.append(
                Diagnostic(
                    "SkipEndpointMismatch",
                    f"skip edge must be reflexive, got {edge.source!r} -> {edge.target!r}",
                    edge,
                )
            )
        if not 0.0 <= edge.threshold <= 1.0:
            diagnostics.append(_threshold_diagnostic(edge, edge.threshold))
    for edge in sorted(graph.obj_edges, key=obj_key):
        if not 0.0 <= edge.threshold <= 1.0:
            diagnostics.append(_threshold_diagnostic(edge, edge.threshold))
    return diagnostics


def _threshold_diagnostic(edge: Edge, threshold: float) -> Diagnostic:
    return Diagnostic(
        "ThresholdOutOfRange",
        f"threshold must lie in [0, 1], got {threshold!r}",
        edge,
    )


def referenced_vocabulary(
    graph: ConstraintGraph,
) -> tuple[frozenset[str], frozenset[str], frozenset[MeasureKey]]:
    """(activities, object types, measure keys) named anywhere in the graph."""
    activities = set()
    otypes = set()
    measures = set()
    for edge in graph.flow_edges:
        activities.update((edge.source, edge.target))
        otypes.add(edge.otype)
    for edge in graph.obj_edges:
        activities.add(edge.activity)
        otypes.add(edge.otype)
    for edge in graph.perf_edges:
        activities.add(edge.activity)
        for key in formula_measures(edge.formula):
            measures.add(key)
            if key.otype:
                otypes.add(key.otype)
    return frozenset(activities), frozenset(otypes), frozenset(measures)


# -- canonical edge order and text -------------------------------------------

def flow_key(edge: FlowEdge):
    return (edge.label.value, edge.source, edge.otype, edge.target, edge.threshold)


def obj_key(edge: ObjEdge):
    return (edge.otype, edge.label.value, edge.activity, edge.threshold)


def perf_key(edge: PerfEdge):
    return (edge.activity, formula_text(edge.formula))


def canonical_edges(graph: ConstraintGraph) -> list[tuple[str, Edge]]:
    """Edges in a deterministic order: flow, then object, then performance."""
    ordered: list[tuple[str, Edge]] = []
    ordered.extend(("flow", e) for e in sorted(graph.flow_edges, key=flow_key))
    ordered.extend(("obj", e) for e in sorted(graph.obj_edges, key=obj_key))
    ordered.extend(("perf", e) for e in sorted(graph.perf_edges, key=perf_key))
    return ordered


def quote(text: str) -> str:
    """Double-quote a string, escaping backslashes and quotes."""
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def edge_text(edge: Edge) -> str:
    """Canonical one-line text of an edge (the DSL form, no semicolon)."""
    if isinstance(edge, FlowEdge):
        if edge.label is FlowLabel.SKIP:
            return (
                f"flow skip {quote(edge.source)} on {edge.otype} "
                f"threshold {format_number(edge.threshold)}"
            )
        return (
            f"flow {edge.label.value} {quote(edge.source)} -> {quote(edge.target)} "
            f"on {edge.otype} threshold {format_number(edge.threshold)}"
        )
    if isinstance(edge, ObjEdge):
        return (
            f"obj {edge.otype} [{edge.label.value}] {quote(edge.activity)} "
            f"threshold {format_number(edge.threshold)}"
        )
    return f"perf {quote(edge.activity)}: {formula_text(edge.formula)}"
