"""Orbit-finite sets presented as tagged unions of guarded set-builders."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import formulas as F
from .atoms import EMPTY, Atom, ParameterContext, TupleType, atom, type_of


@dataclass(frozen=True)
class SetBuilder:
    """``{(x1..xn) : guard}`` tagged with ``name``."""

    name: str
    dimension: int
    guard: F.Formula = F.TRUE
    ctx: ParameterContext = EMPTY

    def __post_init__(self):
        if self.dimension < 0:
            raise ValueError("dimension must be non-negative")
        F.check(self.guard, self.dimension, len(self.ctx))

    def contains(self, tup: Sequence) -> bool:
        return len(tup) == self.dimension and F.eval_ground(self.guard, tup, self.ctx)


@dataclass(frozen=True)
class Orbit:
    builder: str
    otype: TupleType

    def __str__(self):
        return f"{self.builder} : {self.otype}"


@dataclass(frozen=True)
class DefinableSet:
    builders: tuple[SetBuilder, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "builders", tuple(self.builders))
        names = [b.name for b in self.builders]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise ValueError(f"duplicate builder names: {sorted(dup)}")

    def builder(self, name: str) -> SetBuilder:
        for b in self.builders:
            if b.name == name:
                return b
        raise KeyError(f"unknown builder {name!r}")

    def names(self) -> list[str]:
        return [b.name for b in self.builders]


def orbits(ds: DefinableSet) -> list[Orbit]:
    """Orbit decomposition in (declaration order, canonical type order)."""
    return [Orbit(b.name, t)
            for b in ds.builders
            for t in F.satisfying_types(b.guard, b.dimension, b.ctx)]


def orbit_of(ds: DefinableSet, builder: str, tup: Sequence) -> Orbit | None:
    b = ds.builder(builder)
    if len(tup) != b.dimension:
        raise ValueError(f"{builder} has dimension {b.dimension}, got a {len(tup)}-tuple")
    if not F.eval_ground(b.guard, tup, b.ctx):
        return None
    return Orbit(builder, type_of(tup, b.ctx))


def sample(orbit: Orbit, pool: Iterable, ctx: ParameterContext = EMPTY) -> list[tuple[Atom, ...]]:
    """Every tuple over ``pool`` lying in ``orbit``, in lexicographic order."""
    atoms = sorted({atom(a) for a in pool})
    return [tup for tup in itertools.product(atoms, repeat=orbit.otype.arity)
            if type_of(tup, ctx) == orbit.otype]
