"""Quantifier-free guards over tuple positions and parameters.

Terms are 1-based positions ``Pos(i)`` and 1-based parameters ``Param(k)``
(indices into a ``ParameterContext``). Guards are evaluated either on a
ground atom tuple or symbolically on a ``TupleType``; the two agree because
comparisons only ever look at the relative order of their arguments.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .atoms import EMPTY, ParameterContext, TupleType, atom, enumerate_types

OPS: dict[str, Callable] = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}
EQUALITY_OPS = frozenset({"=", "!="})


@dataclass(frozen=True)
class Pos:
    index: int

    def __str__(self):
        return f"p{self.index}"


@dataclass(frozen=True)
class Param:
    index: int

    def __str__(self):
        return f"#{self.index}"


Term = Union[Pos, Param]


@dataclass(frozen=True)
class Cmp:
    op: str
    left: Term
    right: Term

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown comparator {self.op!r}")


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class Bool:
    value: bool


Formula = Union[Cmp, And, Or, Not, Bool]
TRUE = Bool(True)
FALSE = Bool(False)


def conj(*args) -> Formula:
    args = tuple(a for a in args if a != TRUE)
    if not args:
        return TRUE
    return args[0] if len(args) == 1 else And(args)


def disj(*args) -> Formula:
    args = tuple(a for a in args if a != FALSE)
    if not args:
        return FALSE
    return args[0] if len(args) == 1 else Or(args)


def eq(a: Term, b: Term) -> Cmp:
    return Cmp("=", a, b)


def ne(a: Term, b: Term) -> Cmp:
    return Cmp("!=", a, b)


def lt(a: Term, b: Term) -> Cmp:
    return Cmp("<", a, b)


def walk(f: Formula):
    """Yield every node of ``f`` in preorder."""
    yield f
    if isinstance(f, (And, Or)):
        for a in f.args:
            yield from walk(a)
    elif isinstance(f, Not):
        yield from walk(f.arg)


def terms(f: Formula):
    for node in walk(f):
        if isinstance(node, Cmp):
            yield node.left
            yield node.right


def max_position(f: Formula) -> int:
    return max((t.index for t in terms(f) if isinstance(t, Pos)), default=0)


def params_used(f: Formula) -> set[int]:
    return {t.index for t in terms(f) if isinstance(t, Param)}


def operators(f: Formula) -> set[str]:
    return {n.op for n in walk(f) if isinstance(n, Cmp)}


def check(f: Formula, arity: int, nparams: int) -> None:
    """Raise ``IndexError`` when ``f`` mentions a position or parameter out of range."""
    for t in terms(f):
        if isinstance(t, Pos) and not 1 <= t.index <= arity:
            raise IndexError(f"position p{t.index} out of range for arity {arity}")
        if isinstance(t, Param) and not 1 <= t.index <= nparams:
            raise IndexError(f"parameter #{t.index} out of range ({nparams} parameters)")


def _evaluate(f: Formula, value: Callable[[Term], object]) -> bool:
    if isinstance(f, Cmp):
        return OPS[f.op](value(f.left), value(f.right))
    if isinstance(f, And):
        return all(_evaluate(a, value) for a in f.args)
    if isinstance(f, Or):
        return any(_evaluate(a, value) for a in f.args)
    if isinstance(f, Not):
        return not _evaluate(f.arg, value)
    if isinstance(f, Bool):
        return f.value
    raise TypeError(f"not a formula: {f!r}")


def eval_under_type(f: Formula, t: TupleType) -> bool:
    """Truth value of ``f`` on every tuple of type ``t``, read off the cell ranks."""
    check(f, t.arity, t.nparams)

    def rank(term):
        return t.rank(term.index) if isinstance(term, Pos) else t.param_rank(term.index)

    return _evaluate(f, rank)


def eval_ground(f: Formula, tup: Sequence, ctx: ParameterContext = EMPTY) -> bool:
    check(f, len(tup), len(ctx))
    values = [atom(a) for a in tup]

    def value(term):
        return values[term.index - 1] if isinstance(term, Pos) else ctx.params[term.index - 1]

    return _evaluate(f, value)


def satisfying_types(f: Formula, arity: int, ctx: ParameterContext | int = EMPTY) -> list[TupleType]:
    return [t for t in enumerate_types(arity, ctx) if eval_under_type(f, t)]


def shift(f: Formula, offset: int) -> Formula:
    """Renumber positions by ``offset`` (used to place a block inside a concatenation)."""
    if isinstance(f, Cmp):
        def mv(t):
            return Pos(t.index + offset) if isinstance(t, Pos) else t
        return Cmp(f.op, mv(f.left), mv(f.right))
    if isinstance(f, And):
        return And(tuple(shift(a, offset) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(shift(a, offset) for a in f.args))
    if isinstance(f, Not):
        return Not(shift(f.arg, offset))
    return f


_PREC = {Or: 1, And: 2, Not: 3}


def format_formula(f: Formula, term: Callable[[Term], str] = str, _outer: int = 0) -> str:
    """Render ``f`` in the DSL's concrete syntax, parenthesizing only where needed."""
    if isinstance(f, Bool):
        return "true" if f.value else "false"
    if isinstance(f, Cmp):
        return f"{term(f.left)} {f.op} {term(f.right)}"
    prec = _PREC[type(f)]
    if isinstance(f, Not):
        inner = format_formula(f.arg, term, prec)
        text = f"!{inner}"
    else:
        sep = " & " if isinstance(f, And) else " | "
        text = sep.join(format_formula(a, term, prec + 1 if isinstance(a, type(f)) else prec)
                        for a in f.args)
    return f"({text})" if prec <= _outer and not isinstance(f, Not) else text
