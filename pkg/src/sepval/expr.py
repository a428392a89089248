"""Pipeline expressions over a model.

Grammar (left-associative, no precedence, parentheses group)::

    expr    := operand (op operand)*
    op      := '*' | '>'            (combine, compose; operand is a term)
             | '@' | '|'            (project, condition; operand is a domain)
    term    := NAME | 'unit' '(' DOMAIN ')' | 'null' '(' DOMAIN ')' | '(' expr ')'
    DOMAIN  := '{' ... '}' | '[' ... ']'

``phi | y`` is the conditional of phi on its own domain given y.
Every intermediate value is an abstract density: a valuation, or a formal
quotient when division does not stay inside the algebra.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .composition import Density, compose
from .conditionals import conditional
from .errors import DomainSyntaxError, ValuationError
from .quotient import Quotient, multiply

TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_.-]*)|(?P<op>[*@|>()])|(?P<dom>\{[^{}]*\}|\[(?:[^\[\]]|\[[^\[\]]*\])*\]))")


class ExpressionError(ValuationError):
    """Malformed pipeline expression or a failing step."""


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out, i = [], 0
    while i < len(text):
        if text[i:].strip() == "":
            break
        m = TOKEN.match(text, i)
        if not m:
            raise ExpressionError(f"unexpected character {text[i:].lstrip()[0]!r} at offset {i}")
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), m.start(kind)))
        i = m.end()
    return out


# AST nodes: ("name", str) | ("unit"|"null", domain_text) | ("binop", op, lhs, rhs) | ("post", op, lhs, domain_text)


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind=None, text=None) -> Token:
        t = self.peek()
        if t is None or (kind and t.kind != kind) or (text and t.text != text):
            want = text or kind
            got = "end of input" if t is None else repr(t.text)
            raise ExpressionError(f"expected {want}, got {got}")
        self.i += 1
        return t

    def expr(self):
        node = self.term()
        while (t := self.peek()) is not None and t.kind == "op" and t.text in "*>@|":
            self.i += 1
            if t.text in "*>":
                node = ("binop", t.text, node, self.term())
            else:
                node = ("post", t.text, node, self.take("dom").text)
        return node

    def term(self):
        t = self.peek()
        if t is None:
            raise ExpressionError("unexpected end of input")
        if t.kind == "op" and t.text == "(":
            self.i += 1
            node = self.expr()
            self.take("op", ")")
            return node
        if t.kind == "name":
            self.i += 1
            nxt = self.peek()
            if t.text in ("unit", "null") and nxt is not None and nxt.text == "(":
                self.i += 1
                d = self.take("dom").text
                self.take("op", ")")
                return (t.text, d)
            return ("name", t.text)
        raise ExpressionError(f"unexpected {t.text!r} at offset {t.pos}")


def parse(text: str):
    p = _Parser(text)
    node = p.expr()
    if p.peek() is not None:
        t = p.peek()
        raise ExpressionError(f"unexpected {t.text!r} at offset {t.pos}")
    return node


def show(node) -> str:
    kind = node[0]
    if kind == "name":
        return node[1]
    if kind in ("unit", "null"):
        return f"{kind}({node[1]})"
    return f"({show(node[2])} {node[1]} {node[3] if kind == 'post' else show(node[3])})"


def _domain(model, text: str):
    try:
        return model.parse_domain(text)
    except DomainSyntaxError as exc:
        raise ExpressionError(str(exc)) from None


def _step(node, model, fn):
    try:
        return fn()
    except ExpressionError:
        raise
    except ValuationError as exc:
        raise ExpressionError(f"step {show(node)}: {type(exc).__name__}: {exc}") from None


def evaluate(node, model) -> Density:
    kind = node[0]
    if kind == "name":
        try:
            return Density.of(model.lookup(node[1]))
        except KeyError:
            raise ExpressionError(f"unknown name {node[1]!r}") from None
    if kind in ("unit", "null"):
        d = _domain(model, node[1])
        return _step(node, model, lambda: Density.of(getattr(model.algebra, kind)(d)))
    if kind == "binop":
        a, b = evaluate(node[2], model), evaluate(node[3], model)
        if node[1] == "*":
            return _step(node, model, lambda: _combine(a, b))
        return _step(node, model, lambda: compose(a, b))
    a = evaluate(node[2], model)
    d = _domain(model, node[3])
    if node[1] == "@":
        return _step(node, model, lambda: a.project(d))
    return _step(node, model, lambda: _condition(a, d))


def _combine(a: Density, b: Density) -> Density:
    if a.is_member and b.is_member:
        return Density(a.value.combine(b.value))
    return Density.of(multiply(a.quotient, b.quotient))


def _condition(a: Density, y) -> Density:
    if not a.is_member:
        raise ExpressionError("conditioning needs a valuation, got a formal quotient")
    phi = a.value
    return Density.of(conditional(phi, phi.domain, y).body)


def run(text: str, model) -> Density:
    return evaluate(parse(text), model)


def result_value(d: Density):
    """The valuation, or the formal quotient, held by a density."""
    return d.value if d.is_member else d.quotient


__all__ = ["ExpressionError", "parse", "evaluate", "run", "result_value", "show", "tokenize", "Quotient"]
