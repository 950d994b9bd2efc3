"""Lexer, parser and printer for univariate real expressions in ``t``.

Grammar (lowest to highest binding)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := NUMBER | 't' | FUNC '(' expr ')' | '(' expr ')'

so ``-t^2`` is ``-(t^2)``, ``2^3^2`` is ``2^(3^2)`` and ``2^-1`` is legal.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

FUNCTIONS = ("exp", "ln", "sin", "cos", "sqrt")
VARIABLE = "t"


class ExprError(ValueError):
    """Base class for lexing and parsing failures."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnknownCharacter(ExprError):
    pass


class MalformedNumber(ExprError):
    pass


class UnexpectedToken(ExprError):
    pass


class UnbalancedParens(ExprError):
    pass


class UnknownFunction(ExprError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown function {name!r}", position)
        self.name = name


# ---------------------------------------------------------------- tokens

@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    position: int


_SINGLE = {
    "+": "plus",
    "-": "minus",
    "*": "star",
    "/": "slash",
    "^": "caret",
    "(": "lparen",
    ")": "rparen",
    ",": "comma",
}
_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def tokenize(source: str) -> list[Token]:
    tokens = []
    i = 0
    while i < len(source):
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if c in _SINGLE:
            tokens.append(Token(_SINGLE[c], c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            m = _NUMBER.match(source, i)
            if m is None:
                raise MalformedNumber(f"malformed number {c!r}", i)
            end = m.end()
            # "3..5", "1.2.3", "1e5.0" all run straight into another digit or dot
            if end < len(source) and (source[end] == "." or source[end].isdigit()):
                dot = source.find(".", i, end + 1)
                raise MalformedNumber(f"malformed number {source[i:end + 1]!r}",
                                      dot if dot >= 0 else end)
            lexeme = m.group(0)
            if not math.isfinite(float(lexeme)):
                raise MalformedNumber(f"number {lexeme!r} is not finite", i)
            tokens.append(Token("number", lexeme, i))
            i = end
            continue
        m = _IDENT.match(source, i)
        if m is not None:
            tokens.append(Token("identifier", m.group(0), i))
            i = m.end()
            continue
        raise UnknownCharacter(f"unknown character {c!r}", i)
    return tokens


# ------------------------------------------------------------------ AST

@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Variable:
    pass


@dataclass(frozen=True)
class Neg:
    child: Expr


@dataclass(frozen=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow:
    base: Expr
    exponent: Expr


@dataclass(frozen=True)
class Call:
    function: str
    argument: Expr

    def __post_init__(self):
        if self.function not in FUNCTIONS:
            raise ValueError(f"function {self.function!r} not in catalog {FUNCTIONS}")


Expr = Union[Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call]
BINARY = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


# --------------------------------------------------------------- parser

class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0
        self.open_parens: list[int] = []

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def end_position(self) -> int:
        if not self.tokens:
            return 0
        last = self.tokens[-1]
        return last.position + len(last.lexeme)

    def unexpected(self, tok: Token | None, wanted: str) -> ExprError:
        if tok is None:
            if self.open_parens:
                return UnbalancedParens("unclosed '('", self.open_parens[-1])
            return UnexpectedToken(f"unexpected end of input, expected {wanted}", self.end_position())
        if tok.kind == "rparen" and not self.open_parens:
            return UnbalancedParens("unmatched ')'", tok.position)
        return UnexpectedToken(f"unexpected {tok.lexeme!r}, expected {wanted}", tok.position)

    def expect_rparen(self) -> None:
        tok = self.peek()
        if tok is None or tok.kind != "rparen":
            if tok is None:
                raise UnbalancedParens("unclosed '('", self.open_parens[-1])
            raise UnexpectedToken(f"unexpected {tok.lexeme!r}, expected ')'", tok.position)
        self.advance()
        self.open_parens.pop()

    def expr(self) -> Expr:
        node = self.term()
        while (tok := self.peek()) is not None and tok.kind in ("plus", "minus"):
            self.advance()
            rhs = self.term()
            node = Add(node, rhs) if tok.kind == "plus" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while (tok := self.peek()) is not None and tok.kind in ("star", "slash"):
            self.advance()
            rhs = self.unary()
            node = Mul(node, rhs) if tok.kind == "star" else Div(node, rhs)
        return node

    def unary(self) -> Expr:
        tok = self.peek()
        if tok is not None and tok.kind == "minus":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok.kind == "caret":
            self.advance()
            return Pow(base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise self.unexpected(tok, "an operand")
        if tok.kind == "number":
            self.advance()
            return Constant(float(tok.lexeme))
        if tok.kind == "lparen":
            self.advance()
            self.open_parens.append(tok.position)
            node = self.expr()
            self.expect_rparen()
            return node
        if tok.kind == "identifier":
            self.advance()
            nxt = self.peek()
            if nxt is not None and nxt.kind == "lparen":
                if tok.lexeme not in FUNCTIONS:
                    raise UnknownFunction(tok.lexeme, tok.position)
                self.advance()
                self.open_parens.append(nxt.position)
                arg = self.expr()
                self.expect_rparen()
                return Call(tok.lexeme, arg)
            if tok.lexeme == VARIABLE:
                return Variable()
            if tok.lexeme in FUNCTIONS:
                raise UnexpectedToken(f"function {tok.lexeme!r} needs a parenthesized argument",
                                      tok.position)
            raise UnexpectedToken(f"unknown identifier {tok.lexeme!r}", tok.position)
        raise self.unexpected(tok, "an operand")


def parse(tokens: list[Token]) -> Expr:
    p = _Parser(list(tokens))
    node = p.expr()
    if p.peek() is not None:
        raise p.unexpected(p.peek(), "end of input")
    return node


def parse_expr(source: str) -> Expr:
    """Tokenize and parse ``source`` in one step."""
    return parse(tokenize(source))


# -------------------------------------------------------------- printing

def _format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def format_expr(expr: Expr) -> str:
    """Canonical fully parenthesized rendering; ``parse_expr`` inverts it."""
    if isinstance(expr, Constant):
        return _format_number(float(expr.value))
    if isinstance(expr, Variable):
        return VARIABLE
    if isinstance(expr, Neg):
        return f"(-{format_expr(expr.child)})"
    if isinstance(expr, Pow):
        return f"({format_expr(expr.base)}^{format_expr(expr.exponent)})"
    if isinstance(expr, Call):
        return f"{expr.function}({format_expr(expr.argument)})"
    op = BINARY[type(expr)]
    return f"({format_expr(expr.left)}{op}{format_expr(expr.right)})"


# ------------------------------------------------------------ evaluation

_FLOAT_FUNCS = {
    "exp": math.exp,
    "ln": math.log,
    "sin": math.sin,
    "cos": math.cos,
    "sqrt": math.sqrt,
}


def evaluate(expr: Expr, t: float = 0.0) -> float:
    """Plain floating-point value of ``expr`` at ``t``.

    Uses Python float semantics (``**`` for powers), so domain violations
    surface as the usual ``ValueError``/``ZeroDivisionError``.
    """
    if isinstance(expr, Constant):
        return float(expr.value)
    if isinstance(expr, Variable):
        return float(t)
    if isinstance(expr, Neg):
        return -evaluate(expr.child, t)
    if isinstance(expr, Call):
        return _FLOAT_FUNCS[expr.function](evaluate(expr.argument, t))
    if isinstance(expr, Pow):
        result = evaluate(expr.base, t) ** evaluate(expr.exponent, t)
        if isinstance(result, complex):
            raise ValueError("negative base raised to a non-integer power")
        return result
    a, b = evaluate(expr.left, t), evaluate(expr.right, t)
    if isinstance(expr, Add):
        return a + b
    if isinstance(expr, Sub):
        return a - b
    if isinstance(expr, Mul):
        return a * b
    return a / b


def contains_variable(expr: Expr) -> bool:
    if isinstance(expr, Variable):
        return True
    if isinstance(expr, Constant):
        return False
    if isinstance(expr, Neg):
        return contains_variable(expr.child)
    if isinstance(expr, Call):
        return contains_variable(expr.argument)
    if isinstance(expr, Pow):
        return contains_variable(expr.base) or contains_variable(expr.exponent)
    return contains_variable(expr.left) or contains_variable(expr.right)


def split_top_level(source: str) -> list[str]:
    """Split a comma-separated list of expressions, ignoring nested commas."""
    parts, depth, start = [], 0, 0
    for i, c in enumerate(source):
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        elif c == "," and depth == 0:
            parts.append(source[start:i])
            start = i + 1
    parts.append(source[start:])
    return [p.strip() for p in parts]
