"""Recursive-descent parser for curve and profile expressions in ``s``.

Grammar::

    vector := '(' expr ',' expr ',' expr ')'
    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') unary)?
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Expressions compile to closures that run on floats, numpy arrays or
:class:`~ruledsolitons.taylor.Taylor` objects, so derivatives come from
truncated Taylor arithmetic rather than symbolic differentiation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from . import taylor as tl
from .curves import Curve
from .errors import EvalDomainError, ParseError

CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^(),]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int


def tokenize(text: str, line: int | None = None) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", line, col)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, variables, line=None):
        self.tokens = tokenize(text, line)
        self.i = 0
        self.variables = tuple(variables)
        self.line = line

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.take()
        if tok.text != text:
            found = tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", self.line, tok.column)
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.line, tok.column)

    def parse_top(self):
        """A scalar expression or a parenthesised 3-tuple."""
        if self.peek().text == "(":
            save = self.i
            self.take()
            first = self.expr()
            if self.peek().text == ",":
                self.take()
                second = self.expr()
                self.expect(",")
                third = self.expr()
                self.expect(")")
                node = ("vec", first, second, third)
                self._finish()
                return node
            self.i = save
        node = self.expr()
        self._finish()
        return node

    def _finish(self):
        tok = self.peek()
        if tok.kind != "end":
            raise self.error(f"unexpected {tok.text!r}")

    def expr(self):
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.take().text
            node = (op, node, self.unary())
        return node

    def unary(self):
        if self.peek().text in ("+", "-"):
            op = self.take().text
            operand = self.unary()
            return ("neg", operand) if op == "-" else operand
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().text in ("^", "**"):
            self.take()
            exponent = self.unary()
            value = _constant(exponent)
            if value is not None:
                exponent = ("num", value)
            return ("^", base, exponent)
        return base

    def atom(self):
        tok = self.take()
        if tok.kind == "num":
            return ("num", float(tok.text))
        if tok.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "name":
            name = tok.text
            if self.peek().text == "(":
                if name not in tl.FUNCTIONS:
                    raise self.error(f"unknown function {name!r}", tok)
                self.take()
                arg = self.expr()
                self.expect(")")
                return ("call", name, arg)
            if name in self.variables:
                return ("var", name)
            if name in CONSTANTS:
                return ("num", CONSTANTS[name])
            raise self.error(f"unknown name {name!r}", tok)
        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}", tok)


def _constant(node):
    """Numeric value of a variable-free subtree, else None."""
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind in ("var", "vec"):
        return None
    try:
        value = _compile(node)({})
    except (KeyError, ArithmeticError, ValueError, EvalDomainError):
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def _compile(node):
    kind = node[0]
    if kind == "num":
        value = node[1]
        return lambda env: value
    if kind == "var":
        name = node[1]
        return lambda env: env[name]
    if kind == "neg":
        f = _compile(node[1])
        return lambda env: -f(env)
    if kind == "call":
        fn = tl.FUNCTIONS[node[1]]
        f = _compile(node[2])
        return lambda env: fn(f(env))
    if kind == "^":
        fb, fe = _compile(node[1]), _compile(node[2])
        if node[2][0] == "num":
            n = node[2][1]
            return lambda env: _power(fb(env), n)
        return lambda env: tl.exp(fe(env) * tl.log(fb(env)))
    if kind == "vec":
        parts = [_compile(n) for n in node[1:]]
        return lambda env: tuple(p(env) for p in parts)
    fa, fb = _compile(node[1]), _compile(node[2])
    if kind == "+":
        return lambda env: fa(env) + fb(env)
    if kind == "-":
        return lambda env: fa(env) - fb(env)
    if kind == "*":
        return lambda env: fa(env) * fb(env)
    if kind == "/":
        return lambda env: _divide(fa(env), fb(env))
    raise AssertionError(kind)


def _power(base, n):
    if isinstance(base, tl.Taylor):
        return base**n
    if float(n).is_integer():
        return base ** int(n)
    return tl.exp(n * tl.log(base))


def _divide(a, b):
    if not isinstance(b, tl.Taylor) and np.any(np.asarray(b) == 0):
        raise EvalDomainError("division by zero")
    return a / b


class Expression:
    """A compiled scalar or vector expression."""

    def __init__(self, text: str, tree, variables):
        self.text = text
        self.tree = tree
        self.variables = variables
        self.is_vector = tree[0] == "vec"
        self._fn = _compile(tree)

    def __call__(self, *args):
        return self._fn(dict(zip(self.variables, args)))

    def __repr__(self):
        return f"Expression({self.text!r})"


def parse_expression(text: str, variables=("s",), line: int | None = None) -> Expression:
    return Expression(text, _Parser(text, variables, line).parse_top(), tuple(variables))


def parse_curve(text: str, line: int | None = None) -> Curve:
    expr = parse_expression(text, ("s",), line)
    if not expr.is_vector:
        raise ParseError("expected a vector '(x, y, z)'", line, 1)
    return Curve(expr, text)


def parse_scalar(text: str, line: int | None = None) -> Expression:
    expr = parse_expression(text, ("s",), line)
    if expr.is_vector:
        raise ParseError("expected a scalar expression", line, 1)
    return expr


def parse_surface_expr(text: str, line: int | None = None):
    """Curve for ``(ex, ey, ez)`` input, scalar :class:`Expression` otherwise."""
    expr = parse_expression(text, ("s",), line)
    return Curve(expr, text) if expr.is_vector else expr
