"""Definable CSP instances (V definable, D finite) and their finite groundings."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import formulas as F
from .atoms import EMPTY, Atom, ParameterContext, atom, format_atom
from .defsets import DefinableSet


class InvalidInstance(ValueError):
    def __init__(self, diagnostics: list[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class Signature:
    relations: tuple[tuple[str, int], ...] = ()

    def arity(self, name: str) -> int:
        for n, k in self.relations:
            if n == name:
                return k
        raise KeyError(f"unknown relation {name!r}")

    def __contains__(self, name):
        return any(n == name for n, _ in self.relations)


@dataclass(frozen=True)
class FiniteDomain:
    """A finite relational structure without atoms."""

    elements: tuple[str, ...]
    relations: dict = field(default_factory=dict)  # name -> frozenset of element tuples

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "relations",
                           {name: frozenset(tuple(t) for t in ts) for name, ts in self.relations.items()})

    def __len__(self):
        return len(self.elements)

    def __hash__(self):
        return hash((self.elements, tuple(sorted(self.relations))))

    def holds(self, relation: str, values: Sequence[str]) -> bool:
        return tuple(values) in self.relations[relation]


@dataclass(frozen=True)
class ConstraintFamily:
    """``relation(b1, ..., bk)`` for every block tuple whose concatenation satisfies ``guard``.

    ``scope`` pairs a binding name (used by the DSL) with a builder of the
    variable set.
    """

    relation: str
    scope: tuple[tuple[str, str], ...]
    guard: F.Formula = F.TRUE

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple((b, s) for b, s in self.scope))

    @property
    def builders(self) -> tuple[str, ...]:
        return tuple(s for _, s in self.scope)


@dataclass(frozen=True)
class DefinableInstance:
    signature: Signature
    domain: FiniteDomain
    variables: DefinableSet
    families: tuple[ConstraintFamily, ...] = ()
    ctx: ParameterContext = EMPTY
    atoms: str = "order"  # or "equality"; equality instances run on the order kernel unchanged

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))

    def blocks(self, family: ConstraintFamily) -> list[tuple[int, ...]]:
        """1-based positions of each scope block inside the concatenated guard tuple."""
        out, start = [], 1
        for name in family.builders:
            dim = self.variables.builder(name).dimension
            out.append(tuple(range(start, start + dim)))
            start += dim
        return out

    def family_arity(self, family: ConstraintFamily) -> int:
        return sum(self.variables.builder(n).dimension for n in family.builders)


def validate(instance: DefinableInstance) -> list[str]:
    """Every invariant violation as a located message; an empty list means valid."""
    diags = []
    sig, dom = instance.signature, instance.domain
    names = [n for n, _ in sig.relations]
    for n in {n for n in names if names.count(n) > 1}:
        diags.append(f"signature: duplicate relation {n!r}")
    for n, k in sig.relations:
        if k < 1:
            diags.append(f"signature: relation {n!r} has arity {k} < 1")
    if len(set(dom.elements)) != len(dom.elements):
        diags.append("domain: duplicate elements")
    if not dom.elements:
        diags.append("domain: empty domain")
    for n, k in sig.relations:
        if n not in dom.relations:
            diags.append(f"domain: relation {n!r} has no interpretation")
            continue
        for t in sorted(dom.relations[n]):
            if len(t) != k:
                diags.append(f"domain: relation {n!r} tuple {t} has arity {len(t)}, expected {k}")
            elif any(e not in dom.elements for e in t):
                diags.append(f"domain: relation {n!r} tuple {t} uses an unknown element")
    for n in dom.relations:
        if n not in sig:
            diags.append(f"domain: relation {n!r} is not in the signature")
    nparams = len(instance.ctx)
    for b in instance.variables.builders:
        where = f"vars {b.name}"
        if b.ctx != instance.ctx:
            diags.append(f"{where}: parameter context differs from the instance's")
        try:
            F.check(b.guard, b.dimension, nparams)
        except IndexError as e:
            diags.append(f"{where}: guard arity mismatch: {e}")
        diags.extend(_mode_diags(instance, b.guard, where))
    known = set(instance.variables.names())
    for i, fam in enumerate(instance.families):
        where = f"constraint #{i + 1} ({fam.relation})"
        if fam.relation not in sig:
            diags.append(f"{where}: unknown relation {fam.relation!r}")
        elif sig.arity(fam.relation) != len(fam.scope):
            diags.append(f"{where}: relation has arity {sig.arity(fam.relation)}, "
                         f"scope has {len(fam.scope)} blocks")
        missing = [s for s in fam.builders if s not in known]
        for s in missing:
            diags.append(f"{where}: unknown builder {s!r}")
        if not missing:
            try:
                F.check(fam.guard, instance.family_arity(fam), nparams)
            except IndexError as e:
                diags.append(f"{where}: guard arity mismatch: {e}")
        diags.extend(_mode_diags(instance, fam.guard, where))
    if instance.atoms not in ("order", "equality"):
        diags.append(f"atoms: unknown atom theory {instance.atoms!r}")
    return diags


def _mode_diags(instance, guard, where):
    if instance.atoms != "equality":
        return []
    bad = F.operators(guard) - F.EQUALITY_OPS
    return [f"{where}: comparator {op!r} not allowed over equality atoms" for op in sorted(bad)]


def require_valid(instance: DefinableInstance) -> None:
    diags = validate(instance)
    if diags:
        raise InvalidInstance(diags)


def instance_support(instance: DefinableInstance) -> ParameterContext:
    """The parameters some guard actually mentions."""
    used = set()
    for b in instance.variables.builders:
        used |= F.params_used(b.guard)
    for fam in instance.families:
        used |= F.params_used(fam.guard)
    return ParameterContext.of(instance.ctx.params[k - 1] for k in used)


Vertex = tuple  # (builder name, atom tuple)


@dataclass(frozen=True)
class GroundInstance:
    """A finite subinstance: the vertices over ``pool`` and the constraints among them."""

    vertices: tuple[Vertex, ...]
    constraints: tuple[tuple[str, tuple[int, ...]], ...]
    pool: tuple[Atom, ...]
    domain: FiniteDomain

    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def induced(self, keep: Iterable[int]) -> GroundInstance:
        """Subinstance on the kept vertex indices with every constraint inside them."""
        keep = sorted(set(keep))
        remap = {old: new for new, old in enumerate(keep)}
        cons = tuple((r, tuple(remap[i] for i in idx)) for r, idx in self.constraints
                     if all(i in remap for i in idx))
        return GroundInstance(tuple(self.vertices[i] for i in keep), cons, self.pool, self.domain)

    def to_json(self) -> dict:
        return {
            "pool": [format_atom(a) for a in self.pool],
            "vertices": [{"builder": b, "tuple": [format_atom(a) for a in t]} for b, t in self.vertices],
            "constraints": [{"relation": r, "vertices": list(idx)} for r, idx in self.constraints],
        }


def vertex_label(v: Vertex) -> str:
    builder, tup = v
    return f"{builder}({','.join(format_atom(a) for a in tup)})"


def ground(instance: DefinableInstance, pool: Iterable) -> GroundInstance:
    """All vertices over ``pool`` plus the parameters, and every constraint among them."""
    atoms = tuple(sorted({atom(a) for a in pool} | set(instance.ctx.params)))
    ctx = instance.ctx
    vertices, by_builder = [], {}
    for b in instance.variables.builders:
        rows = by_builder.setdefault(b.name, [])
        for tup in itertools.product(atoms, repeat=b.dimension):
            if F.eval_ground(b.guard, tup, ctx):
                rows.append(len(vertices))
                vertices.append((b.name, tup))
    seen, constraints = set(), []
    for fam in instance.families:
        for combo in itertools.product(*(by_builder[s] for s in fam.builders)):
            concat = tuple(a for i in combo for a in vertices[i][1])
            if F.eval_ground(fam.guard, concat, ctx):
                c = (fam.relation, tuple(combo))
                if c not in seen:
                    seen.add(c)
                    constraints.append(c)
    return GroundInstance(tuple(vertices), tuple(constraints), atoms, instance.domain)


def to_dot(g: GroundInstance, name: str = "ground") -> str:
    """Graphviz view: binary constraints as labelled arcs, unary ones in vertex labels,
    higher arities as small hyperedge nodes."""
    unary: dict[int, list[str]] = {}
    for r, idx in g.constraints:
        if len(idx) == 1:
            unary.setdefault(idx[0], []).append(r)
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    for i, v in enumerate(g.vertices):
        label = ",".join(format_atom(a) for a in v[1]) or "()"
        if len(g.vertices) and len({b for b, _ in g.vertices}) > 1:
            label = f"{v[0]}\\n{label}"
        if i in unary:
            label += "\\n" + " ".join(unary[i])
        lines.append(f'  v{i} [label="{label}"];')
    for j, (r, idx) in enumerate(g.constraints):
        if len(idx) == 2:
            lines.append(f'  v{idx[0]} -> v{idx[1]} [label="{r}"];')
        elif len(idx) > 2:
            lines.append(f'  c{j} [shape=point, xlabel="{r}"];')
            for k, i in enumerate(idx):
                lines.append(f'  c{j} -> v{i} [label="{k + 1}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
