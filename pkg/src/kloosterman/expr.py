"""A univariate expression language over GF(2^m).

Grammar (whitespace insignificant):

    expr     := term { "+" term }
    term     := factor { ("*" | "/") factor }
    factor   := base [ "^" exponent ]
    base     := VAR | "0" | "1" | "(" expr ")" | "sqrt" "(" expr ")"
    exponent := INT | "(" INT "/" POW2 ")" | "(" "-" INT "/" POW2 ")"

VAR is a single ASCII letter, INT a decimal integer with optional leading
"-", POW2 a decimal power of two. "+" is field addition (XOR), "/" is
multiplication by the inverse, and exponents are dyadic rationals.
sqrt(e) is parsed as e^(1/2). Juxtaposition is not multiplication; "*" is
mandatory. An expression may mention at most one variable name.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dyadic import DyadicRational
from .field import DomainError, FieldCtx, ZERO_INVERSE


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class Expr:
    """Base class for AST nodes; all nodes are frozen and compare structurally."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Const(Expr):
    value: int  # 0 or 1


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: DyadicRational


ZERO = Const(0)
ONE = Const(1)


def free_variable(e: Expr) -> str | None:
    """The single variable name used in e, or None for a constant expression."""
    match e:
        case Var(name):
            return name
        case Const():
            return None
        case Add(l, r) | Mul(l, r) | Div(l, r):
            return free_variable(l) or free_variable(r)
        case Pow(base, _):
            return free_variable(base)
    raise TypeError(f"not an expression node: {e!r}")


# ---- tokenizer ----------------------------------------------------------------


def _tokenize(text: str):
    tokens: list[tuple[str, object, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+*/^()-":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word == "sqrt":
                tokens.append(("sqrt", word, i))
            elif len(word) == 1 and word.isascii():
                tokens.append(("var", word, i))
            else:
                raise ParseError(f"unknown name {word!r}", i)
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.var: str | None = None

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind: str):
        tok = self.tokens[self.pos]
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.pos += 1
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing {tok[0]!r}", tok[2])
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[0] == "+":
            self.take("+")
            e = Add(e, self.term())
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take(self.peek()[0])[0]
            rhs = self.factor()
            e = Mul(e, rhs) if op == "*" else Div(e, rhs)
        return e

    def factor(self) -> Expr:
        base = self.base()
        if self.peek()[0] == "^":
            self.take("^")
            return Pow(base, self.exponent())
        return base

    def base(self) -> Expr:
        kind, value, pos = self.peek()
        if kind == "var":
            self.take("var")
            if self.var is None:
                self.var = value
            elif self.var != value:
                raise ParseError(
                    f"second variable {value!r} (already using {self.var!r})", pos
                )
            return Var(value)
        if kind == "int":
            self.take("int")
            if value in (0, 1):
                return Const(value)
            raise ParseError(f"only the constants 0 and 1 are allowed, got {value}", pos)
        if kind == "(":
            self.take("(")
            e = self.expr()
            self.take(")")
            return e
        if kind == "sqrt":
            self.take("sqrt")
            self.take("(")
            e = self.expr()
            self.take(")")
            return Pow(e, DyadicRational(1, 1))
        raise ParseError(f"expected a value, found {kind!r}", pos)

    def exponent(self) -> DyadicRational:
        kind, value, pos = self.peek()
        if kind == "int":
            self.take("int")
            return DyadicRational(value)
        if kind == "-":
            self.take("-")
            num = self.take("int")[1]
            return DyadicRational(-num)
        if kind == "(":
            self.take("(")
            sign = 1
            if self.peek()[0] == "-":
                self.take("-")
                sign = -1
            num = self.take("int")[1]
            self.take("/")
            dkind, den, dpos = self.take("int")
            if den <= 0 or den & (den - 1):
                raise ParseError(
                    f"exponent denominator must be a power of two, got {den}", dpos
                )
            self.take(")")
            return DyadicRational(sign * num, den.bit_length() - 1)
        raise ParseError("expected an exponent", pos)


def parse(text: str) -> Expr:
    """Parse an expression; raises ParseError with a position on bad input."""
    return _Parser(text).parse()


# ---- formatting ----------------------------------------------------------------

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4


def to_text(e: Expr) -> str:
    """Render e in the grammar; parse(to_text(e)) is structurally e."""
    return _fmt(e, 0)


def _fmt(e: Expr, parent: int) -> str:
    match e:
        case Var(name):
            return name
        case Const(v):
            return str(v)
        case Add(l, r):
            s = f"{_fmt(l, _LEVEL_ADD)}+{_fmt(r, _LEVEL_ADD)}"
            return f"({s})" if parent > _LEVEL_ADD else s
        case Mul(l, r):
            s = f"{_fmt(l, _LEVEL_MUL)}*{_fmt(r, _LEVEL_POW)}"
            return f"({s})" if parent > _LEVEL_MUL else s
        case Div(l, r):
            s = f"{_fmt(l, _LEVEL_MUL)}/{_fmt(r, _LEVEL_POW)}"
            return f"({s})" if parent > _LEVEL_MUL else s
        case Pow(base, exp):
            b = _fmt(base, _LEVEL_ATOM)
            if exp.log2_den == 0:
                return f"{b}^{exp.num}"
            return f"{b}^({exp.num}/{1 << exp.log2_den})"
    raise TypeError(f"not an expression node: {e!r}")


# ---- evaluation ----------------------------------------------------------------


def evaluate(ctx: FieldCtx, e: Expr, value: int) -> int:
    """Evaluate e at the given element; DomainError names the bad subexpression."""
    match e:
        case Var():
            return value
        case Const(v):
            return v
        case Add(l, r):
            return evaluate(ctx, l, value) ^ evaluate(ctx, r, value)
        case Mul(l, r):
            return ctx.mul(evaluate(ctx, l, value), evaluate(ctx, r, value))
        case Div(l, r):
            den = evaluate(ctx, r, value)
            if den == 0:
                raise DomainError(
                    ZERO_INVERSE, f"division by zero in {to_text(e)}", expr=e
                )
            return ctx.mul(evaluate(ctx, l, value), ctx.inv(den))
        case Pow(base, exp):
            bv = evaluate(ctx, base, value)
            try:
                return ctx.pow_dyadic(bv, exp)
            except DomainError as err:
                raise DomainError(err.reason, f"{err} in {to_text(e)}", expr=e) from None
    raise TypeError(f"not an expression node: {e!r}")


def evaluate_all(ctx: FieldCtx, e: Expr) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate e at every field element at once.

    Returns (values, err): err marks the points where evaluation is
    undefined (division by zero, or 0 raised to a nonpositive exponent);
    values at those points are meaningless.
    """
    t = ctx.tables
    q = ctx.q

    def rec(node: Expr) -> tuple[np.ndarray, np.ndarray]:
        match node:
            case Var():
                return t.elems, np.zeros(q, dtype=bool)
            case Const(v):
                return np.full(q, v, dtype=np.int32), np.zeros(q, dtype=bool)
            case Add(l, r):
                av, ae = rec(l)
                bv, be = rec(r)
                return av ^ bv, ae | be
            case Mul(l, r):
                av, ae = rec(l)
                bv, be = rec(r)
                return t.vec_mul(av, bv), ae | be
            case Div(l, r):
                av, ae = rec(l)
                bv, be = rec(r)
                return t.vec_mul(av, t.inv_table[bv]), ae | be | (bv == 0)
            case Pow(base, exp):
                bv, be = rec(base)
                err = be | (bv == 0) if exp.num <= 0 else be
                x = bv
                for _ in range(exp.log2_den):
                    x = t.sqrt_table[x]
                out = _vec_pow(t, x, abs(exp.num))
                if exp.num < 0:
                    out = t.inv_table[out]
                return out, err
        raise TypeError(f"not an expression node: {node!r}")

    return rec(e)


def _vec_pow(t, base: np.ndarray, n: int) -> np.ndarray:
    result = np.ones(base.shape, dtype=np.int32)
    acc = base
    while n:
        if n & 1:
            result = t.vec_mul(result, acc)
        n >>= 1
        if n:
            acc = t.square_table[acc]
    return result
