"""Textual form of constraint graphs (``.occg`` files).

One file holds any number of ``constraint`` blocks::

    # dunning: no reminder after the payment arrived
    constraint "reminder-after-payment" {
      flow causal "collect payment" -> "send reminder" on Order threshold 0;
      obj Order [1..1] "collect payment" threshold 0.5;
      perf "collect payment": avg_sojourn_time > 15h and event_count >= 1;
    }

Activities are double-quoted strings (they routinely contain spaces);
object types are bare identifiers. Numbers accept duration suffixes
``s``/``m``/``h``/``d`` and are normalized to seconds while parsing.
Comments run from ``#`` to the end of the line.

:func:`parse` only ever returns graphs that pass
:func:`~ocmon.graphs.validate_graph`; :func:`serialize` emits a canonical
form (edges sorted) that parses back to an equal graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DslSyntaxError, InvalidGraphError
from .graphs import (
    And,
    Comparison,
    ConstraintGraph,
    FlowEdge,
    FlowLabel,
    Not,
    ObjEdge,
    ObjLabel,
    Or,
    PerfEdge,
    canonical_edges,
    edge_text,
    quote,
    validate_graph,
)
from .metrics import MeasureKey

_DURATION_SECONDS = {"s": 1, "m": 60, "h": 3600, "d": 86400}

_PUNCTUATION = {
    "{": "LBRACE",
    "}": "RBRACE",
    "[": "LBRACKET",
    "]": "RBRACKET",
    "(": "LPAREN",
    ")": "RPAREN",
    ";": "SEMI",
    ":": "COLON",
}

_FLOW_LABELS = {label.value: label for label in FlowLabel}
_OBJ_LABELS = {label.value: label for label in ObjLabel}


@dataclass(frozen=True)
class Token:
    kind: str
    value: object
    line: int
    column: int


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def error(self, message: str, line: int | None = None, column: int | None = None):
        raise DslSyntaxError(message, line or self.line, column or self.column)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
            self.pos += 1

    def _peek(self, offset: int = 0) -> str:
        index = self.pos + offset
        return self.text[index] if index < len(self.text) else ""

    def tokens(self) -> list[Token]:
        result = []
        while True:
            token = self._next()
            result.append(token)
            if token.kind == "EOF":
                return result

    def _next(self) -> Token:
        while True:
            ch = self._peek()
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self._peek() not in ("", "\n"):
                    self._advance()
            else:
                break

        line, column = self.line, self.column
        ch = self._peek()
        if ch == "":
            return Token("EOF", None, line, column)
        if ch in _PUNCTUATION:
            self._advance()
            return Token(_PUNCTUATION[ch], ch, line, column)
        if ch == "-":
            if self._peek(1) == ">":
                self._advance(2)
                return Token("ARROW", "->", line, column)
            self._advance()
            return Token("MINUS", "-", line, column)
        if ch in "<>=":
            if ch in "<>" and self._peek(1) == "=":
                self._advance(2)
                return Token("OP", ch + "=", line, column)
            self._advance()
            return Token("OP", ch, line, column)
        if ch == '"':
            return self._string(line, column)
        if ch.isdigit():
            return self._number_or_label(line, column)
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self._peek().isalnum() or self._peek() == "_":
                self._advance()
            return Token("IDENT", self.text[start : self.pos], line, column)
        self.error(f"unexpected character {ch!r}", line, column)

    def _string(self, line: int, column: int) -> Token:
        self._advance()  # opening quote
        parts = []
        while True:
            ch = self._peek()
            if ch == "":
                self.error("unterminated string", line, column)
            if ch == '"':
                self._advance()
                return Token("STRING", "".join(parts), line, column)
            if ch == "\\":
                escaped = self._peek(1)
                if escaped not in ('"', "\\"):
                    self.error(f"unknown escape \\{escaped}", self.line, self.column)
                parts.append(escaped)
                self._advance(2)
            else:
                parts.append(ch)
                self._advance()

    def _number_or_label(self, line: int, column: int) -> Token:
        start = self.pos
        while self._peek().isdigit():
            self._advance()
        # cardinality labels: digits '..' (digit | '*')
        if self._peek() == "." and self._peek(1) == ".":
            self._advance(2)
            if self._peek() == "*":
                self._advance()
            else:
                while self._peek().isdigit():
                    self._advance()
            return Token("CARD", self.text[start : self.pos], line, column)
        if self._peek() == "." and self._peek(1).isdigit():
            self._advance()
            while self._peek().isdigit():
                self._advance()
        value = float(self.text[start : self.pos])
        suffix = self._peek()
        if suffix in _DURATION_SECONDS and not (
            self._peek(1).isalnum() or self._peek(1) == "_"
        ):
            value *= _DURATION_SECONDS[suffix]
            self._advance()
        return Token("NUMBER", value, line, column)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, token: Token | None = None):
        token = token or self.current
        raise DslSyntaxError(message, token.line, token.column)

    def _advance(self) -> Token:
        token = self.current
        if token.kind != "EOF":
            self.pos += 1
        return token

    def expect(self, kind: str, what: str) -> Token:
        if self.current.kind != kind:
            self.error(f"expected {what}, got {self._describe(self.current)}")
        return self._advance()

    def expect_keyword(self, word: str) -> Token:
        if self.current.kind != "IDENT" or self.current.value != word:
            self.error(f"expected {word!r}, got {self._describe(self.current)}")
        return self._advance()

    @staticmethod
    def _describe(token: Token) -> str:
        if token.kind == "EOF":
            return "end of input"
        return repr(token.value)

    # -- grammar ------------------------------------------------------------

    def document(self) -> list[ConstraintGraph]:
        graphs = []
        while self.current.kind != "EOF":
            graphs.append(self.constraint())
        return graphs

    def constraint(self) -> ConstraintGraph:
        self.expect_keyword("constraint")
        name = self.expect("STRING", "a quoted constraint name")
        self.expect("LBRACE", "'{'")
        flow, obj, perf = [], [], []
        while self.current.kind != "RBRACE":
            if self.current.kind == "EOF":
                self.error("expected '}' before end of input")
            keyword = self.expect("IDENT", "an edge keyword (flow, obj, perf)")
            if keyword.value == "flow":
                flow.append(self.flow_edge())
            elif keyword.value == "obj":
                obj.append(self.obj_edge())
            elif keyword.value == "perf":
                perf.append(self.perf_edge())
            else:
                self.error(
                    f"expected 'flow', 'obj' or 'perf', got {keyword.value!r}", keyword
                )
        self.expect("RBRACE", "'}'")
        graph = ConstraintGraph(
            name=name.value,
            flow_edges=frozenset(flow),
            obj_edges=frozenset(obj),
            perf_edges=frozenset(perf),
        )
        diagnostics = validate_graph(graph)
        if diagnostics:
            details = "; ".join(d.message for d in diagnostics)
            raise InvalidGraphError(
                f"constraint {graph.name!r} is invalid: {details}", tuple(diagnostics)
            )
        return graph

    def flow_edge(self) -> FlowEdge:
        label_token = self.expect("IDENT", "a flow label (causal, concur, choice, skip)")
        label = _FLOW_LABELS.get(label_token.value)
        if label is None:
            self.error(
                f"unknown flow label {label_token.value!r}", label_token
            )
        source = self.expect("STRING", "a quoted activity").value
        if label is FlowLabel.SKIP:
            # accepted syntactically so validation can flag the mismatch
            if self.current.kind == "ARROW":
                self._advance()
                target = self.expect("STRING", "a quoted activity").value
            else:
                target = source
        else:
            self.expect("ARROW", "'->'")
            target = self.expect("STRING", "a quoted activity").value
        self.expect_keyword("on")
        otype = self.expect("IDENT", "an object type").value
        threshold = self.threshold()
        return FlowEdge(source=source, otype=otype, target=target, label=label,
                        threshold=threshold)

    def obj_edge(self) -> ObjEdge:
        otype = self.expect("IDENT", "an object type").value
        self.expect("LBRACKET", "'['")
        card = self.expect("CARD", "an involvement label (0..0, 1..1, 1..*, 2..*)")
        label = _OBJ_LABELS.get(card.value)
        if label is None:
            self.error(f"unknown involvement label {card.value!r}", card)
        self.expect("RBRACKET", "']'")
        activity = self.expect("STRING", "a quoted activity").value
        threshold = self.threshold()
        return ObjEdge(otype=otype, activity=activity, label=label, threshold=threshold)

    def perf_edge(self) -> PerfEdge:
        activity = self.expect("STRING", "a quoted activity").value
        self.expect("COLON", "':'")
        formula = self.formula()
        self.expect("SEMI", "';'")
        return PerfEdge(formula=formula, activity=activity)

    def threshold(self) -> float:
        self.expect_keyword("threshold")
        value = self.expect("NUMBER", "a number").value
        self.expect("SEMI", "';'")
        return value

    # formulas: 'or' < 'and' < 'not' < atoms
    def formula(self):
        node = self.conjunction()
        while self.current.kind == "IDENT" and self.current.value == "or":
            self._advance()
            node = Or(node, self.conjunction())
        return node

    def conjunction(self):
        node = self.negation()
        while self.current.kind == "IDENT" and self.current.value == "and":
            self._advance()
            node = And(node, self.negation())
        return node

    def negation(self):
        if self.current.kind == "IDENT" and self.current.value == "not":
            self._advance()
            return Not(self.negation())
        return self.atom()

    def atom(self):
        if self.current.kind == "LPAREN":
            self._advance()
            node = self.formula()
            self.expect("RPAREN", "')'")
            return node
        return self.comparison()

    def comparison(self) -> Comparison:
        name_token = self.expect("IDENT", "a measure name")
        otype = None
        if self.current.kind == "LPAREN":
            self._advance()
            otype = self.expect("IDENT", "an object type").value
            self.expect("RPAREN", "')'")
        measure = MeasureKey(name=name_token.value, otype=otype)
        op = self.expect("OP", "a comparator (<, <=, =, >=, >)").value
        sign = 1.0
        if self.current.kind == "MINUS":
            self._advance()
            sign = -1.0
        value = self.expect("NUMBER", "a number").value
        return Comparison(measure=measure, op=op, value=sign * value)


def parse(text: str) -> list[ConstraintGraph]:
    """Parse ``.occg`` text into validated constraint graphs.

    Raises :class:`DslSyntaxError` (with line and column) on malformed
    input, :class:`InvalidGraphError` when a block breaches a graph
    invariant, and :class:`UnknownMeasureError` for unregistered measures.
    """
    return _Parser(_Lexer(text).tokens()).document()


def serialize(graph: ConstraintGraph) -> str:
    """Canonical text of one graph; ``parse`` returns an equal graph.

    Set-equal graphs serialize identically: edges are emitted in canonical
    order (flow, object, performance; each family sorted).
    """
    diagnostics = validate_graph(graph)
    if diagnostics:
        details = "; ".join(d.message for d in diagnostics)
        raise InvalidGraphError(
            f"constraint {graph.name!r} is invalid: {details}", tuple(diagnostics)
        )
    lines = [f"constraint {quote(graph.name)} {{"]
    lines.extend(f"  {edge_text(edge)};" for _, edge in canonical_edges(graph))
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_all(graphs) -> str:
    """Concatenate :func:`serialize` over several graphs."""
    return "\n".join(serialize(graph) for graph in graphs)
