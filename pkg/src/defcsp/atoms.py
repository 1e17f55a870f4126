"""Atom kernel: the dense linear order (Q, <) with finitely many named parameters.

An orbit of an atom tuple under the order-automorphisms fixing the parameters
pointwise is determined by its complete order type: the weak order it induces
on its positions together with the parameters. ``TupleType`` is that weak
order, stored as a dense rank vector over ``positions + parameters``.

Text form of a type lists its cells from smallest to largest, separated by
``<``; members of one cell are joined by ``=``, parameters (``#k``, 1-based)
first, then positions (``pN``, 1-based)::

    p1 < #1 = p2 < p3

The empty type (no positions, no parameters) is written ``()``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Atom = Fraction


def atom(value) -> Atom:
    """Coerce ints, ``Fraction`` and strings such as ``"3/2"`` to an exact atom."""
    if isinstance(value, float):
        raise TypeError("atoms are exact rationals; floats are rejected")
    return Fraction(value)


def format_atom(a: Atom) -> str:
    return str(a)


@dataclass(frozen=True)
class ParameterContext:
    """Strictly increasing tuple of parameter atoms (the support of an instance)."""

    params: tuple[Atom, ...] = ()

    def __post_init__(self):
        params = tuple(atom(p) for p in self.params)
        for a, b in zip(params, params[1:]):
            if not a < b:
                raise ValueError(f"parameters must be strictly increasing, got {a} before {b}")
        object.__setattr__(self, "params", params)

    @classmethod
    def of(cls, values: Iterable) -> ParameterContext:
        """Build a context from an unordered collection, dropping duplicates."""
        return cls(tuple(sorted({atom(v) for v in values})))

    def __len__(self):
        return len(self.params)

    def index(self, value) -> int:
        """1-based index of a parameter value."""
        return self.params.index(atom(value)) + 1


EMPTY = ParameterContext()


@dataclass(frozen=True, order=True)
class TupleType:
    """Complete order type of an ``arity``-tuple relative to ``nparams`` parameters.

    ``ranks[i]`` is the cell index of element ``i`` where elements are the
    positions ``0..arity-1`` followed by the parameters. Ranks are dense and
    the parameters occupy strictly increasing cells.
    """

    arity: int
    nparams: int
    ranks: tuple[int, ...]

    def __post_init__(self):
        if len(self.ranks) != self.arity + self.nparams:
            raise ValueError("rank vector length must be arity + nparams")
        if self.ranks and sorted(set(self.ranks)) != list(range(max(self.ranks) + 1)):
            raise ValueError(f"ranks are not dense: {self.ranks}")
        pr = self.ranks[self.arity:]
        if any(a >= b for a, b in zip(pr, pr[1:])):
            raise ValueError("parameters must lie in strictly increasing cells")

    @property
    def ncells(self) -> int:
        return max(self.ranks) + 1 if self.ranks else 0

    def rank(self, position: int) -> int:
        """Cell of a 1-based position."""
        return self.ranks[position - 1]

    def param_rank(self, k: int) -> int:
        """Cell of the 1-based parameter ``k``."""
        return self.ranks[self.arity + k - 1]

    @property
    def cells(self) -> list[tuple[tuple[int, ...], int | None]]:
        """Cells in increasing order as ``(positions, parameter-or-None)`` pairs, 1-based."""
        out: list[tuple[list[int], int | None]] = [([], None) for _ in range(self.ncells)]
        for i in range(self.arity):
            out[self.ranks[i]][0].append(i + 1)
        for k in range(self.nparams):
            r = self.ranks[self.arity + k]
            out[r] = (out[r][0], k + 1)
        return [(tuple(p), k) for p, k in out]

    def key(self):
        return (self.arity, self.nparams, self.ranks)

    def __str__(self):
        if not self.ranks:
            return "()"
        parts = []
        for positions, param in self.cells:
            members = ([f"#{param}"] if param is not None else []) + [f"p{i}" for i in positions]
            parts.append(" = ".join(members))
        return " < ".join(parts)


def _dense(values: Sequence) -> tuple[int, ...]:
    order = {v: i for i, v in enumerate(sorted(set(values)))}
    return tuple(order[v] for v in values)


def type_of(tup: Sequence, ctx: ParameterContext = EMPTY) -> TupleType:
    values = [atom(a) for a in tup] + list(ctx.params)
    return TupleType(len(tup), len(ctx), _dense(values))


def enumerate_types(arity: int, ctx: ParameterContext | int = EMPTY) -> list[TupleType]:
    """All complete types of ``arity`` positions over the parameters, sorted canonically.

    Built by inserting positions one at a time into the parameter chain; each
    insertion either joins an existing cell or opens a new one in a gap, so
    every weak order arises exactly once.
    """
    if arity < 0:
        raise ValueError("arity must be non-negative")
    nparams = ctx if isinstance(ctx, int) else len(ctx)
    # a weak order is a list of cells; each cell a list of element ids
    orders = [[[arity + k] for k in range(nparams)]]
    for pos in range(arity):
        grown = []
        for cells in orders:
            for i in range(len(cells)):
                grown.append(cells[:i] + [cells[i] + [pos]] + cells[i + 1:])
            for i in range(len(cells) + 1):
                grown.append(cells[:i] + [[pos]] + cells[i:])
        orders = grown
    types = []
    for cells in orders:
        ranks = [0] * (arity + nparams)
        for r, cell in enumerate(cells):
            for e in cell:
                ranks[e] = r
        types.append(TupleType(arity, nparams, tuple(ranks)))
    return sorted(types)


def restrict_type(t: TupleType, positions: Sequence[int]) -> TupleType:
    """Type of the sub-tuple selected by 1-based ``positions`` (repeats allowed)."""
    for p in positions:
        if not 1 <= p <= t.arity:
            raise IndexError(f"position {p} out of range for arity {t.arity}")
    ranks = [t.ranks[p - 1] for p in positions] + list(t.ranks[t.arity:])
    return TupleType(len(positions), t.nparams, _dense(ranks))


def cell_values(ncells: int, anchors: dict[int, Atom]) -> list[Atom]:
    """Deterministic atoms for ``ncells`` increasing cells, some pinned to anchor values.

    Free cells between two anchors take evenly spaced rationals strictly
    between them; below the first anchor they step down by 1, above the last
    they step up by 1; with no anchors they are 0, 1, 2, ...
    """
    values: list[Atom | None] = [anchors.get(i) for i in range(ncells)]
    pinned = sorted(anchors)
    if not pinned:
        return [Fraction(i) for i in range(ncells)]
    first, last = pinned[0], pinned[-1]
    for i in range(first):
        values[i] = anchors[first] - (first - i)
    for i in range(last + 1, ncells):
        values[i] = anchors[last] + (i - last)
    for lo, hi in zip(pinned, pinned[1:]):
        gap = hi - lo
        for i in range(lo + 1, hi):
            values[i] = anchors[lo] + (anchors[hi] - anchors[lo]) * Fraction(i - lo, gap)
    return values


def representative(t: TupleType, ctx: ParameterContext = EMPTY) -> tuple[Atom, ...]:
    """A canonical ground tuple whose type is ``t``."""
    if t.nparams != len(ctx):
        raise ValueError("type and context disagree on the number of parameters")
    anchors = {t.param_rank(k + 1): p for k, p in enumerate(ctx.params)}
    values = cell_values(t.ncells, anchors)
    return tuple(values[t.ranks[i]] for i in range(t.arity))


_TOKEN = re.compile(r"\s*(?:(p)(\d+)|(#)(\d+)|(<)|(=)|(\(\)))")


def parse_type(text: str, arity: int | None = None, nparams: int | None = None) -> TupleType:
    """Inverse of ``str(TupleType)``.

    Arity and parameter count are inferred from the largest indices unless
    given explicitly (a parameter or position may be absent only if none exist).
    """
    cells: list[list[tuple[str, int]]] = [[]]
    pos = 0
    text = text.strip()
    if text == "()":
        return TupleType(arity or 0, nparams or 0, ())
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad type string at {pos}: {text!r}")
        pos = m.end()
        if m.group(1):
            cells[-1].append(("p", int(m.group(2))))
        elif m.group(3):
            cells[-1].append(("#", int(m.group(4))))
        elif m.group(5):
            cells.append([])
        elif m.group(7):
            raise ValueError("'()' only denotes the empty type")
    if any(not c for c in cells):
        raise ValueError(f"empty cell in type string {text!r}")
    found_p = [i for c in cells for kind, i in c if kind == "p"]
    found_k = [i for c in cells for kind, i in c if kind == "#"]
    n = arity if arity is not None else max(found_p, default=0)
    m_ = nparams if nparams is not None else max(found_k, default=0)
    if sorted(found_p) != list(range(1, n + 1)) or sorted(found_k) != list(range(1, m_ + 1)):
        raise ValueError(f"type string {text!r} does not mention every element exactly once")
    ranks = [0] * (n + m_)
    for r, cell in enumerate(cells):
        for kind, i in cell:
            ranks[(i - 1) if kind == "p" else (n + i - 1)] = r
    return TupleType(n, m_, tuple(ranks))
