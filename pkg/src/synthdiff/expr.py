"""Expression trees for smooth functions, with a small infix parser.

Expressions are immutable and hashable.  They can be built with Python
operators (``X = var(0); X**2 + 3*X``) or parsed from text::

    >>> parse("x^2 + sin(y)/2", ["x", "y"])
    Add(...)

Evaluation is generic: :func:`evaluate` walks the tree with ordinary
Python arithmetic, so any ring type (Fraction, mpmath floats, polynomials,
Weil-algebra elements) can be plugged in.  Function nodes are dispatched
through a caller-supplied table.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

FUNCTIONS = ("exp", "log", "sin", "cos")

# x, y, t are aliases for x1, x2, x3
DEFAULT_ALIASES = {"x": 0, "y": 1, "t": 2}


class ExprError(ValueError):
    pass


class Expr:
    """Base class of expression nodes."""

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise ExprError("only integer exponents are supported")
        return Pow(self, n)

    def arity(self) -> int:
        """One more than the largest variable index used (0 for constants)."""
        return max((c.arity() for c in self.children()), default=0)

    def children(self) -> tuple["Expr", ...]:
        return ()

    def is_polynomial(self) -> bool:
        """True if no function nodes, derivatives or non-constant denominators occur."""
        return all(c.is_polynomial() for c in self.children())

    def to_string(self, names: Sequence[str] | None = None) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.to_string()


@dataclass(frozen=True, repr=True)
class Const(Expr):
    value: Fraction

    def to_string(self, names=None):
        v = self.value
        return str(v) if v >= 0 and v.denominator == 1 else f"({v})"


@dataclass(frozen=True)
class Var(Expr):
    index: int

    def arity(self):
        return self.index + 1

    def to_string(self, names=None):
        return var_name(self.index, names)


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def to_string(self, names=None):
        return f"(-{self.arg.to_string(names)})"


@dataclass(frozen=True)
class _Binary(Expr):
    left: Expr
    right: Expr
    symbol = "?"

    def children(self):
        return (self.left, self.right)

    def to_string(self, names=None):
        return f"({self.left.to_string(names)} {self.symbol} {self.right.to_string(names)})"


@dataclass(frozen=True)
class Add(_Binary):
    symbol = "+"


@dataclass(frozen=True)
class Sub(_Binary):
    symbol = "-"


@dataclass(frozen=True)
class Mul(_Binary):
    symbol = "*"


@dataclass(frozen=True)
class Div(_Binary):
    symbol = "/"

    def is_polynomial(self):
        return self.left.is_polynomial() and _is_constant(self.right)


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def children(self):
        return (self.base,)

    def is_polynomial(self):
        if self.exponent < 0:
            return _is_constant(self.base)
        return self.base.is_polynomial()

    def to_string(self, names=None):
        base = self.base.to_string(names)
        if isinstance(self.base, Pow):
            base = f"({base})"
        exp = str(self.exponent) if self.exponent >= 0 else f"({self.exponent})"
        return f"{base}^{exp}"


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise ExprError(f"unknown function {self.name!r}")

    def children(self):
        return (self.arg,)

    def is_polynomial(self):
        return False

    def to_string(self, names=None):
        return f"{self.name}({self.arg.to_string(names)})"


@dataclass(frozen=True)
class Diff(Expr):
    """Partial derivative of ``arg`` with respect to variable ``index``.

    Not produced by the parser; evaluation is done by first-order lifting
    (see :mod:`synthdiff.jet`).
    """

    arg: Expr
    index: int

    def children(self):
        return (self.arg,)

    def arity(self):
        return max(self.arg.arity(), self.index + 1)

    def is_polynomial(self):
        return False

    def to_string(self, names=None):
        return f"diff({self.arg.to_string(names)}, {var_name(self.index, names)})"


def _is_constant(e: Expr) -> bool:
    return e.arity() == 0 and not _has_nodes(e, (Func, Diff))


def _has_nodes(e: Expr, kinds) -> bool:
    return isinstance(e, kinds) or any(_has_nodes(c, kinds) for c in e.children())


def var_name(index: int, names: Sequence[str] | None = None) -> str:
    if names is not None and index < len(names):
        return names[index]
    return f"x{index + 1}"


def as_expr(value: Any) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Const(Fraction(value))
    if isinstance(value, str):
        return Const(Fraction(value))
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


def const(value) -> Const:
    return Const(Fraction(value))


def var(index: int) -> Var:
    return Var(index)


def exp(e) -> Func:
    return Func("exp", as_expr(e))


def log(e) -> Func:
    return Func("log", as_expr(e))


def sin(e) -> Func:
    return Func("sin", as_expr(e))


def cos(e) -> Func:
    return Func("cos", as_expr(e))


def evaluate(e: Expr, args: Sequence[Any], funcs: Mapping[str, Callable] | None = None,
             diff: Callable | None = None, lift_const: Callable | None = None):
    """Evaluate ``e`` at ``args`` using the operators of the argument type.

    ``funcs`` maps function names to callables; a missing entry raises
    :class:`ExprError`.  ``diff(node, args)`` handles :class:`Diff` nodes.
    ``lift_const`` converts rational constants into the ring (defaults to
    leaving them as Fractions, relying on mixed arithmetic).
    """
    funcs = funcs or {}
    lift = lift_const or (lambda c: c)
    cache: dict[int, Any] = {}

    def go(node):
        key = id(node)
        if key in cache:
            return cache[key]
        if isinstance(node, Const):
            out = lift(node.value)
        elif isinstance(node, Var):
            if node.index >= len(args):
                raise ExprError(f"variable {var_name(node.index)} has no value")
            out = args[node.index]
        elif isinstance(node, Neg):
            out = -go(node.arg)
        elif isinstance(node, Add):
            out = go(node.left) + go(node.right)
        elif isinstance(node, Sub):
            out = go(node.left) - go(node.right)
        elif isinstance(node, Mul):
            out = go(node.left) * go(node.right)
        elif isinstance(node, Div):
            out = go(node.left) / go(node.right)
        elif isinstance(node, Pow):
            b = go(node.base)
            out = _power(b, node.exponent, lift)
        elif isinstance(node, Func):
            if node.name not in funcs:
                raise ExprError(f"function {node.name}() not available in this evaluation mode")
            out = funcs[node.name](go(node.arg))
        elif isinstance(node, Diff):
            if diff is None:
                raise ExprError("derivative nodes not available in this evaluation mode")
            out = diff(node, args)
        else:
            raise ExprError(f"unknown node {node!r}")
        cache[key] = out
        return out

    return go(e)


def _power(b, n: int, lift):
    if n < 0:
        return lift(Fraction(1)) / _power(b, -n, lift)
    result = None
    acc = b
    while n:
        if n & 1:
            result = acc if result is None else result * acc
        n >>= 1
        if n:
            acc = acc * acc
    return lift(Fraction(1)) if result is None else result


# ---------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprError(f"unexpected character {text[pos:].strip()[:1]!r} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, resolve: Callable[[str], int]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.resolve = resolve
        self.text = text

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ExprError(f"expected {value or 'token'} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Expr:
        if not self.tokens:
            raise ExprError("empty expression")
        e = self.sum()
        if self.i != len(self.tokens):
            raise ExprError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return e

    def sum(self):
        e = self.product()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.product()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def product(self):
        e = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                e = Mul(e, rhs)
            elif isinstance(e, Const) and isinstance(rhs, Const) and rhs.value:
                # p/q literal
                e = Const(e.value / rhs.value)
            else:
                e = Div(e, rhs)
        return e

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            inner = self.unary()
            if isinstance(inner, Const):
                return Const(-inner.value)
            return Neg(inner)
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            paren = self.peek() == ("op", "(")
            if paren:
                self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, tok = self.take()
            if kind != "num" or not tok.isdigit():
                raise ExprError(f"exponent must be an integer literal in {self.text!r}")
            if paren:
                self.take(")")
            return Pow(base, sign * int(tok))
        return base

    def atom(self):
        kind, tok = self.take()
        if kind == "num":
            return Const(Fraction(tok))
        if kind == "name":
            if self.peek() == ("op", "("):
                if tok not in FUNCTIONS:
                    raise ExprError(f"unknown function {tok!r}")
                self.take("(")
                arg = self.sum()
                self.take(")")
                return Func(tok, arg)
            return Var(self.resolve(tok))
        if tok == "(":
            e = self.sum()
            self.take(")")
            return e
        raise ExprError(f"unexpected {tok!r} in {self.text!r}")


def resolver(names: Sequence[str] | None):
    """Map a variable name to its index.

    With explicit ``names`` only those are accepted.  Otherwise ``x1..xn``
    and the aliases ``x, y, t`` are recognised.
    """
    if names is not None:
        table = {n: i for i, n in enumerate(names)}

        def resolve(name):
            if name not in table:
                raise ExprError(f"unknown variable {name!r}; expected one of {list(names)}")
            return table[name]
        return resolve

    def resolve(name):
        if name in DEFAULT_ALIASES:
            return DEFAULT_ALIASES[name]
        m = re.fullmatch(r"x(\d+)", name)
        if m and int(m.group(1)) >= 1:
            return int(m.group(1)) - 1
        raise ExprError(f"unknown variable {name!r}")
    return resolve


def parse(text: str, names: Sequence[str] | None = None) -> Expr:
    """Parse infix text into an :class:`Expr`."""
    return _Parser(text, resolver(names)).parse()
