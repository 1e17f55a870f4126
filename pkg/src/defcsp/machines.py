"""Register machines over equality atoms and their definable configuration graphs.

A configuration is a state plus register contents, each register holding an
atom or being erased (``None``). Configurations with the same state and the
same erased/set pattern form one set-builder whose tuple lists the set
registers in declaration order. Every transition reads an input atom ``x``;
there is an edge between two configurations iff some ``x`` satisfies the
guard and produces the target. ``x`` is eliminated by cases: it equals one of
the set source registers, or it is fresh.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import formulas as F
from .atoms import atom
from .csp_model import ConstraintFamily, DefinableInstance, FiniteDomain, Signature, ground
from .defsets import DefinableSet, SetBuilder

INPUT = "in"  # assignment source: the input atom; ``None`` erases


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    guard: tuple[tuple[str, str], ...] = ()       # (register, "=" | "!=") against the input
    assign: tuple[tuple[str, str | None], ...] = ()  # (register, INPUT | None)

    def __str__(self):
        parts = [f"{self.source} -> {self.target}"]
        if self.guard:
            parts.append("when " + " & ".join(f"{r} {op} in" for r, op in self.guard))
        if self.assign:
            parts.append("do " + ", ".join(f"{r} := {'in' if s else '_'}" for r, s in self.assign))
        return " ".join(parts)


@dataclass(frozen=True)
class RegisterMachine:
    states: tuple[str, ...]
    registers: tuple[str, ...]
    transitions: tuple[Transition, ...]

    def validate(self) -> list[str]:
        diags = []
        for what, names in (("state", self.states), ("register", self.registers)):
            for n in sorted({n for n in names if names.count(n) > 1}):
                diags.append(f"duplicate {what} {n!r}")
        for i, t in enumerate(self.transitions):
            where = f"transition {i + 1} ({t.source} -> {t.target})"
            for s in (t.source, t.target):
                if s not in self.states:
                    diags.append(f"{where}: undeclared state {s!r}")
            for r, op in t.guard:
                if r not in self.registers:
                    diags.append(f"{where}: guard references undeclared register {r!r}")
                if op not in F.EQUALITY_OPS:
                    diags.append(f"{where}: guard comparator {op!r} is not = or !=")
            for r, src in t.assign:
                if r not in self.registers:
                    diags.append(f"{where}: assignment to undeclared register {r!r}")
                if src not in (INPUT, None):
                    diags.append(f"{where}: bad assignment source {src!r}")
        return diags


def builder_name(state: str, pattern: tuple[bool, ...]) -> str:
    if not pattern:
        return state
    return f"{state}__{''.join('1' if p else '0' for p in pattern)}"


@dataclass(frozen=True)
class EdgeFamily:
    transition: int
    source: str
    target: str
    guard: F.Formula


@dataclass(frozen=True)
class ConfigurationGraph:
    machine: RegisterMachine
    variables: DefinableSet
    edges: tuple[EdgeFamily, ...]
    patterns: dict  # builder name -> (state, pattern)

    def families(self, relation: str = "edge") -> list[ConstraintFamily]:
        return [ConstraintFamily(relation, (("s", e.source), ("t", e.target)), e.guard)
                for e in self.edges]

    def label(self, builder: str, tup) -> tuple:
        """``(state, register values)`` of a ground vertex, ``None`` for erased registers."""
        state, pattern = self.patterns[builder]
        it = iter(tup)
        return state, tuple(next(it) if p else None for p in pattern)


def _edge_guard(m: RegisterMachine, t: Transition, src: tuple[bool, ...]) -> tuple[tuple[bool, ...], F.Formula]:
    regs = m.registers
    assign = dict(t.assign)
    tgt = tuple(True if assign.get(r, "keep") == INPUT else
                False if r in assign else src[i] for i, r in enumerate(regs))
    src_pos, tgt_pos = {}, {}
    for i, r in enumerate(regs):
        if src[i]:
            src_pos[r] = F.Pos(len(src_pos) + 1)
    for i, r in enumerate(regs):
        if tgt[i]:
            tgt_pos[r] = F.Pos(len(src_pos) + len(tgt_pos) + 1)

    def case(x: F.Pos | None) -> F.Formula:
        # x is a source register position, or None for an input distinct from every register
        parts = []
        for r, op in t.guard:
            if r in src_pos and x is not None:
                parts.append(F.Cmp(op, src_pos[r], x))
            elif op == "=":
                return F.FALSE
        fresh_slots = []
        for r, p in tgt_pos.items():
            if assign.get(r) == INPUT:
                if x is not None:
                    parts.append(F.eq(p, x))
                else:
                    fresh_slots.append(p)
            else:
                parts.append(F.eq(p, src_pos[r]))
        for p in fresh_slots:
            parts.extend(F.ne(p, s) for s in src_pos.values())
        parts.extend(F.eq(a, b) for a, b in zip(fresh_slots, fresh_slots[1:]))
        return F.conj(*parts)

    cases = [case(x) for x in src_pos.values()] + [case(None)]
    return tgt, F.disj(*dict.fromkeys(cases))


def compile_machine(m: RegisterMachine) -> ConfigurationGraph:
    diags = m.validate()
    if diags:
        raise ValueError("; ".join(diags))
    patterns = {}
    builders = []
    for state in m.states:
        for pattern in itertools.product((True, False), repeat=len(m.registers)):
            name = builder_name(state, pattern)
            patterns[name] = (state, pattern)
            builders.append(SetBuilder(name, sum(pattern)))
    edges = []
    for i, t in enumerate(m.transitions):
        for pattern in itertools.product((True, False), repeat=len(m.registers)):
            tgt, guard = _edge_guard(m, t, pattern)
            if guard != F.FALSE:
                edges.append(EdgeFamily(i, builder_name(t.source, pattern),
                                        builder_name(t.target, tgt), guard))
    return ConfigurationGraph(m, DefinableSet(tuple(builders)), tuple(edges), patterns)


def graph_instance(cg: ConfigurationGraph, relation: str = "edge") -> DefinableInstance:
    """The configuration graph as a CSP with a one-element domain that allows every edge."""
    dom = FiniteDomain(("*",), {relation: {("*", "*")}})
    return DefinableInstance(Signature(((relation, 2),)), dom, cg.variables,
                             tuple(cg.families(relation)), atoms="equality")


def ground_graph(cg: ConfigurationGraph, pool) -> tuple[set, set]:
    """Labelled vertices and edges of the compiled graph grounded over ``pool``."""
    g = ground(graph_instance(cg), pool)
    labels = [cg.label(b, tup) for b, tup in g.vertices]
    return set(labels), {(labels[i], labels[j]) for _, (i, j) in g.constraints}


class _Fresh:
    """An input atom outside the pool; it stands for every such atom."""

    def __repr__(self):
        return "fresh"


def simulate_ground(m: RegisterMachine, pool) -> tuple[set, set]:
    """Configuration graph over ``pool`` computed by running the machine directly.

    Vertices are all configurations whose register values come from
    ``pool``. Inputs range over ``pool`` plus one fresh atom: up to
    automorphisms fixing the pool, every atom outside it behaves the same.
    """
    atoms = sorted({atom(a) for a in pool})
    fresh = _Fresh()
    configs = [(s, vals) for s in m.states
               for vals in itertools.product([*atoms, None], repeat=len(m.registers))]
    edges = set()
    for state, vals in configs:
        current = dict(zip(m.registers, vals))
        for t in m.transitions:
            if t.source != state:
                continue
            for x in [*atoms, fresh]:
                if not all((current[r] is not None and current[r] == x) == (op == "=")
                           for r, op in t.guard):
                    continue
                nxt = dict(current)
                for r, src in t.assign:
                    nxt[r] = x if src == INPUT else None
                if any(v is fresh for v in nxt.values()):
                    continue
                edges.add(((state, vals), (t.target, tuple(nxt[r] for r in m.registers))))
    return set(configs), edges


def canonical_form(graph: tuple[set, set]):
    """Sorted vertex and edge lists; labels are canonical, so equal forms mean isomorphic graphs."""
    def key(label):
        state, vals = label
        return state, tuple((v is None, v if v is not None else 0) for v in vals)

    vertices, edges = graph
    return (sorted(vertices, key=key),
            sorted(edges, key=lambda e: (key(e[0]), key(e[1]))))


def access_control_machine() -> RegisterMachine:
    """The one-register access-control machine: password set, three tries, erase on failure."""
    states = ("SET_PASSW", "START", "A1", "A2", "A3", "A4", "A5",
              "AUTH_TRY_1", "AUTH_TRY_2", "AUTH_TRY_3", "GRANT_AUTH",
              "B1", "B2", "B3", "CHNG_PASSW", "EXIT_AUTH")
    eq, ne = (("R", "="),), (("R", "!="),)
    store, erase = (("R", INPUT),), (("R", None),)
    T = Transition
    transitions = (
        T("SET_PASSW", "START", assign=store),
        T("START", "A2"),
        T("A1", "A3"), T("A1", "A4"), T("A3", "A5"), T("A4", "A2"), T("A4", "A5"),
        T("A5", "A2"), T("A2", "A1"), T("A1", "A2"), T("A3", "A3"),
        T("A5", "AUTH_TRY_1"),
        T("AUTH_TRY_1", "GRANT_AUTH", eq), T("AUTH_TRY_1", "AUTH_TRY_2", ne),
        T("AUTH_TRY_2", "GRANT_AUTH", eq), T("AUTH_TRY_2", "AUTH_TRY_3", ne),
        T("AUTH_TRY_3", "GRANT_AUTH", eq), T("AUTH_TRY_3", "START", ne, erase),
        T("GRANT_AUTH", "B1"), T("GRANT_AUTH", "B2"), T("B1", "B3"), T("B2", "CHNG_PASSW"),
        T("B3", "EXIT_AUTH"), T("B2", "B1"), T("B1", "B2"), T("B3", "B3"),
        T("EXIT_AUTH", "START"),
        T("CHNG_PASSW", "START", assign=store),
    )
    return RegisterMachine(states, ("R",), transitions)
