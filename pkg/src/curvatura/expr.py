"""Expression language for surface parametrizations.

Grammar (lowest to highest precedence)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' ['-'] INT)?
    atom    := NUMBER | 's' | 't' | FUNC '(' expr ')' | '(' expr ')'

so ``-s^2`` is ``-(s^2)`` and ``2*-s`` is accepted. Chained powers are rejected.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DomainError, ExprSyntaxError, UnknownIdentifierError

FUNCTIONS = ("sin", "cos", "exp", "sqrt", "ln")
VARIABLES = ("s", "t")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow:
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: Expr


Expr = Num | Var | Neg | BinOp | Pow | Call

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    def offset(i: int) -> int:
        return len(src[:i].encode("utf-8"))

    tokens = []
    pos = 0
    while src[pos:].strip():
        m = _TOKEN.match(src, pos)
        if m is None:
            bad = pos + len(src[pos:]) - len(src[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {src[bad]!r}", offset(bad), src)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), offset(m.start(kind))))
        pos = m.end()
    tokens.append(("end", "", offset(len(src))))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok=None) -> ExprSyntaxError:
        tok = tok or self.peek()
        return ExprSyntaxError(msg, tok[2], self.src)

    def expect(self, value: str) -> None:
        tok = self.advance()
        if tok[1] != value or tok[0] != "op":
            shown = tok[1] or "end of input"
            raise self.error(f"expected {value!r}, found {shown!r}", tok)

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[:2] != ("op", "^"):
            return base
        self.advance()
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            sign = -1
        tok = self.advance()
        if tok[0] != "num" or not tok[1].isdigit():
            raise self.error("exponent must be an integer literal", tok)
        if self.peek()[:2] == ("op", "^"):
            raise self.error("chained powers need parentheses")
        return Pow(base, sign * int(tok[1]))

    def atom(self) -> Expr:
        tok = self.advance()
        kind, text, _ = tok
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text in VARIABLES:
                return Var(text)
            if text in FUNCTIONS:
                if self.peek()[:2] != ("op", "("):
                    raise self.error(f"function {text} requires parentheses")
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise UnknownIdentifierError(f"unknown identifier {text!r}", tok[2], self.src)
        if (kind, text) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        shown = text or "end of input"
        raise self.error(f"unexpected {shown!r}", tok)


def parse_expr(src: str) -> Expr:
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0, src)
    return _Parser(src).parse()


def to_source(e: Expr) -> str:
    """Fully parenthesized text that parses back to an equal tree."""
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_source(e.operand)})"
    if isinstance(e, BinOp):
        return f"({to_source(e.left)} {e.op} {to_source(e.right)})"
    if isinstance(e, Pow):
        return f"({to_source(e.base)}^{e.exponent})"
    if isinstance(e, Call):
        return f"{e.func}({to_source(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def evaluate(e: Expr, s: float, t: float) -> float:
    """Plain floating point evaluation (no derivatives)."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return s if e.name == "s" else t
    if isinstance(e, Neg):
        return -evaluate(e.operand, s, t)
    if isinstance(e, BinOp):
        x = evaluate(e.left, s, t)
        y = evaluate(e.right, s, t)
        if e.op == "+":
            return x + y
        if e.op == "-":
            return x - y
        if e.op == "*":
            return x * y
        if y == 0.0:
            raise DomainError("division by zero", to_source(e))
        return x / y
    if isinstance(e, Pow):
        x = evaluate(e.base, s, t)
        if x == 0.0 and e.exponent < 0:
            raise DomainError("division by zero", to_source(e))
        return x**e.exponent
    if isinstance(e, Call):
        x = evaluate(e.arg, s, t)
        if e.func == "sqrt":
            if x < 0.0:
                raise DomainError("sqrt of a negative number", to_source(e))
            return math.sqrt(x)
        if e.func == "ln":
            if x <= 0.0:
                raise DomainError("ln of a non-positive number", to_source(e))
            return math.log(x)
        return {"sin": math.sin, "cos": math.cos, "exp": math.exp}[e.func](x)
    raise TypeError(f"not an expression node: {e!r}")
