"""Recursive-descent parser for the coefficient expression language.

Grammar (| separates alternatives, * is repetition):

    expr    :=  term  (('+' | '-') term)*
    term    :=  factor (('*' | '/') factor)*
    factor  :=  '-' factor  |  power
    power   :=  atom ('^' factor)?          # right-associative
    atom    :=  NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Names are the variable ``x``, a declared parameter, or one of the fixed
functions sin, cos, tan, tanh, sinh, cosh, sech, exp, log, sqrt,
arcsinh, abs.  ``-x^2`` is rejected as ambiguous: write ``(-x)^2`` or
``-(x^2)``.
"""

import math
import re
from dataclasses import dataclass
from typing import Union

FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "tanh": math.tanh,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "sech": lambda v: 1.0 / math.cosh(v),
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "arcsinh": math.asinh,
    "abs": abs,
}


class ExpressionError(ValueError):
    """Syntax or name error, carrying 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Name:
    """The variable x or a parameter reference."""
    name: str
    line: int = 1
    column: int = 1


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Name, Neg, Bin, Call]

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str, line: int):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = len(text) - len(stripped) + 1
            raise ExpressionError(f"unexpected character {stripped[0]!r}", line, col)
        if m.lastgroup == "num":
            tokens.append(("num", m.group("num"), m.start("num") + 1))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name") + 1))
        else:
            tokens.append(("op", m.group("op"), m.start("op") + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens, line):
        self.tokens = tokens
        self.line = line
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ExpressionError(message, self.line, tok[2])

    def expect_op(self, op):
        kind, value, col = self.peek()
        if kind != "op" or value != op:
            self.fail(f"expected {op!r}")
        return self.next()

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected trailing input {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.next()[1]
            node = Bin(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.next()[1]
            node = Bin(op, node, self.factor())
        return node

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.next()
            operand = self.factor_after_minus()
            return Neg(operand)
        return self.power()

    def factor_after_minus(self):
        if self.peek()[:2] == ("op", "-"):
            self.next()
            return Neg(self.factor_after_minus())
        node = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.fail("ambiguous '-' before '^': write (-x)^2 or -(x^2)")
        return node

    def power(self):
        node = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.next()
            node = Bin("^", node, self.factor())
        return node

    def atom(self):
        kind, value, col = self.peek()
        if kind == "num":
            self.next()
            return Num(float(value))
        if kind == "name":
            self.next()
            if self.peek()[:2] == ("op", "("):
                if value not in FUNCTIONS:
                    raise ExpressionError(f"unknown function {value!r}", self.line, col)
                self.next()
                arg = self.expr()
                self.expect_op(")")
                return Call(value, arg)
            return Name(value, self.line, col)
        if (kind, value) == ("op", "("):
            self.next()
            node = self.expr()
            self.expect_op(")")
            return node
        self.fail(f"expected a number, name, or '(', got {value!r}" if value else "unexpected end of expression")


def parse_expression(text: str, line: int = 1) -> Node:
    """Parse one expression; ``line`` seeds error locations."""
    return _Parser(_tokenize(text, line), line).parse()


def evaluate(node: Node, x: float, params: dict) -> float:
    """Evaluate with the variable x and a parameter environment."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Name):
        if node.name == "x":
            return x
        try:
            return params[node.name]
        except KeyError:
            raise ExpressionError(f"unknown name {node.name!r}", node.line, node.column) from None
    if isinstance(node, Neg):
        return -evaluate(node.operand, x, params)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](evaluate(node.arg, x, params))
    left = evaluate(node.left, x, params)
    right = evaluate(node.right, x, params)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        return left / right
    return left ** right


def free_names(node: Node) -> set:
    """All Name identifiers appearing in a tree (the variable x included)."""
    if isinstance(node, Name):
        return {node.name}
    if isinstance(node, Neg):
        return free_names(node.operand)
    if isinstance(node, Call):
        return free_names(node.arg)
    if isinstance(node, Bin):
        return free_names(node.left) | free_names(node.right)
    return set()


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}


def pretty(node: Node) -> str:
    """Render a tree back to parseable text.

    Conservative about parentheses around '-' and '^' so the rendered
    form never trips the ambiguity rejection.
    """
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({pretty(node.arg)})"
    if isinstance(node, Neg):
        return f"-({pretty(node.operand)})"
    lp = _needs_parens(node.left, _PRECEDENCE[node.op], left_side=True, parent_op=node.op)
    rp = _needs_parens(node.right, _PRECEDENCE[node.op], left_side=False, parent_op=node.op)
    left = f"({pretty(node.left)})" if lp else pretty(node.left)
    right = f"({pretty(node.right)})" if rp else pretty(node.right)
    return f"{left} {node.op} {right}"


def _needs_parens(child, parent_prec, left_side, parent_op):
    if isinstance(child, (Num, Name, Call)):
        return False
    if isinstance(child, Neg):
        # Neg already renders with its own parentheses, but a '^' parent
        # must still fence its base.
        return parent_op == "^" and left_side
    prec = _PRECEDENCE[child.op]
    if prec < parent_prec:
        return True
    if prec > parent_prec:
        return False
    # Equal precedence: keep evaluation order for '-', '/', and '^'.
    if parent_op == "^":
        return left_side
    return not left_side and parent_op in ("-", "/")
