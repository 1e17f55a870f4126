"""Instance file format.

::

    // line comment
    atoms order                      // or: atoms equality
    params { 0 3/2 }                 // optional; referenced as #1, #2
    domain { Y G B }
    relation neq/2 = { (Y,G) (Y,B) (G,Y) (G,B) (B,Y) (B,G) }
    vars V(2) where x.1 != x.2
    constraint neq on u : V, v : V where (u.1 = v.2 & u.2 != v.1) | (u.1 != v.2 & u.2 = v.1)
    machine access edges step {
      registers R
      states START TRY GRANT
      START -> TRY
      TRY -> GRANT when R = in
      TRY -> START when R != in do R := _
    }
    option max_pool = 5

Declarations appear in the order shown; ``params`` and ``option`` lines are
optional, ``where`` defaults to ``true``. In guards ``x.i`` (or ``V.i``) is
position ``i`` of a vars tuple and ``u.i`` position ``i`` of the block bound
to ``u``; parameters are ``#k`` or rational literals such as ``-1`` or
``3/2``. Comparators are ``= != < <= > >=`` (only ``=`` and ``!=`` over
equality atoms); connectives ``& | !`` with the usual precedence. A machine
adds one vars builder per state and erased-register pattern (``STATE`` or
``STATE__10``), and with ``edges REL`` one binary constraint family per
transition.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import formulas as F
from .atoms import ParameterContext, atom, format_atom
from .csp_model import (ConstraintFamily, DefinableInstance, FiniteDomain, Signature, validate)
from .defsets import DefinableSet, SetBuilder
from .machines import INPUT, RegisterMachine, Transition, compile_machine

OPTIONS = ("max_pool", "brute_bound")


class DslError(ValueError):
    def __init__(self, diagnostics: list[str]):
        super().__init__("\n".join(diagnostics))
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class MachineBlock:
    name: str
    machine: RegisterMachine
    relation: str | None = None


@dataclass
class InstanceFile:
    atoms: str
    domain: FiniteDomain
    signature: Signature
    varsets: list[SetBuilder]
    families: list[ConstraintFamily]
    ctx: ParameterContext
    machines: list[MachineBlock] = field(default_factory=list)
    options: dict = field(default_factory=dict)

    @property
    def instance(self) -> DefinableInstance:
        builders = list(self.varsets)
        families = list(self.families)
        for mb in self.machines:
            cg = compile_machine(mb.machine)
            builders.extend(SetBuilder(b.name, b.dimension, b.guard, self.ctx)
                            for b in cg.variables.builders)
            if mb.relation is not None:
                families.extend(cg.families(mb.relation))
        return DefinableInstance(self.signature, self.domain, DefinableSet(tuple(builders)),
                                 tuple(families), self.ctx, self.atoms)


_TOKENS = re.compile(r"""
    (?P<ws>[ \t\r]+|//[^\n]*)
  | (?P<nl>\n)
  | (?P<sym>->|:=|!=|<=|>=|[{}(),:.#=<>&|!/_])
  | (?P<num>-?\d+(?:/\d+)?)
  | (?P<id>[A-Za-z][A-Za-z0-9_]*)
""", re.VERBOSE)

KEYWORDS = {"atoms", "params", "domain", "relation", "vars", "constraint", "machine", "option",
            "where", "on", "edges", "registers", "states", "when", "do", "in", "true", "false"}


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int

    def at(self):
        return f"{self.line}:{self.col}"


def tokenize(text: str) -> list[Tok]:
    toks, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if not m:
            raise DslError([f"{line}:{pos - start + 1}: unexpected character {text[pos]!r}"])
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind != "ws":
            toks.append(Tok(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - start + 1))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0
        self.diags: list[str] = []

    # token helpers
    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, text):
        return self.tok.text == text and self.tok.kind != "eof"

    def take(self, text=None, kind=None) -> Tok:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind) or t.kind == "eof" and text:
            want = repr(text) if text else kind
            raise DslError([f"{t.at()}: expected {want}, found {t.text or 'end of file'!r}"])
        self.i += 1
        return t

    def ident(self) -> Tok:
        t = self.tok
        if t.kind != "id" or t.text in KEYWORDS:
            raise DslError([f"{t.at()}: expected a name, found {t.text or 'end of file'!r}"])
        self.i += 1
        return t

    def integer(self) -> int:
        t = self.take(kind="num")
        if "/" in t.text or t.text.startswith("-"):
            raise DslError([f"{t.at()}: expected a non-negative integer, found {t.text!r}"])
        return int(t.text)

    def error(self, tok: Tok, msg: str):
        self.diags.append(f"{tok.at()}: {msg}")

    # file structure
    def parse(self) -> InstanceFile:
        atoms = "order"
        if self.peek("atoms"):
            self.take("atoms")
            t = self.take(kind="id")
            if t.text not in ("order", "equality"):
                raise DslError([f"{t.at()}: atoms must be 'order' or 'equality', found {t.text!r}"])
            atoms = t.text
        self.atoms = atoms
        self.declared: list[Fraction] = []
        if self.peek("params"):
            self.take("params")
            self.take("{")
            while not self.peek("}"):
                self.declared.append(atom(self.take(kind="num").text))
            self.take("}")
        if not self.peek("domain"):
            raise DslError([f"{self.tok.at()}: missing domain"])
        self.take("domain")
        self.take("{")
        elements = []
        while not self.peek("}"):
            t = self.tok
            if t.kind not in ("id", "num"):
                raise DslError([f"{t.at()}: expected a domain element, found {t.text or 'end of file'!r}"])
            self.i += 1
            if t.text in elements:
                self.error(t, f"duplicate domain element {t.text!r}")
            elements.append(t.text)
        self.take("}")
        relations, interp = [], {}
        while self.peek("relation"):
            self.take("relation")
            name = self.ident()
            self.take("/")
            k = self.integer()
            if any(n == name.text for n, _ in relations):
                self.error(name, f"duplicate relation {name.text!r}")
            tuples = set()
            self.take("=")
            self.take("{")
            while self.peek("("):
                lp = self.take("(")
                tup = [self.take().text]
                while self.peek(","):
                    self.take(",")
                    tup.append(self.take().text)
                self.take(")")
                if len(tup) != k:
                    self.error(lp, f"tuple of arity {len(tup)} in relation {name.text}/{k}")
                for e in tup:
                    if e not in elements:
                        self.error(lp, f"unknown domain element {e!r}")
                tuples.add(tuple(tup))
            self.take("}")
            relations.append((name.text, k))
            interp[name.text] = tuples
        self.relations = dict(relations)
        # guards are parsed to formulas over raw parameter values, re-indexed at the end
        varsets = []
        while self.peek("vars"):
            kw = self.take("vars")
            name = self.ident()
            self.take("(")
            dim = self.integer()
            self.take(")")
            guard = self.where({"x": name.text, name.text: name.text})
            if any(v[0] == name.text for v in varsets):
                self.error(name, f"duplicate vars {name.text!r}")
            varsets.append((name.text, dim, guard, kw))
        families = []
        while self.peek("constraint"):
            kw = self.take("constraint")
            rel = self.ident()
            if rel.text not in self.relations:
                self.error(rel, f"unknown relation {rel.text!r}")
            self.take("on")
            bindings = [self.binding()]
            while self.peek(","):
                self.take(",")
                bindings.append(self.binding())
            scope = {}
            for b, s in bindings:
                if b.text in scope:
                    self.error(b, f"binding {b.text!r} used twice")
                scope[b.text] = b.text
            if rel.text in self.relations and self.relations[rel.text] != len(bindings):
                self.error(rel, f"relation {rel.text} has arity {self.relations[rel.text]}, "
                                f"{len(bindings)} bindings given")
            guard = self.where(scope)
            families.append((rel.text, bindings, guard))
        machines = []
        while self.peek("machine"):
            machines.append(self.machine())
        options = {}
        while self.peek("option"):
            self.take("option")
            name = self.ident()
            self.take("=")
            value = self.integer()
            if name.text not in OPTIONS:
                self.error(name, f"unknown option {name.text!r}")
            options[name.text] = value
        if self.tok.kind != "eof":
            raise DslError([f"{self.tok.at()}: unexpected {self.tok.text!r}"])
        if not varsets and not machines:
            self.diags.append(f"{self.tok.at()}: missing vars")
        if self.diags:
            raise DslError(self.diags)

        dims = {n: d for n, d, _, _ in varsets}
        for mb in machines:
            try:
                cg = compile_machine(mb.machine)
            except ValueError:
                continue
            for b in cg.variables.builders:
                if b.name in dims:
                    self.diags.append(f"machine {mb.name}: builder {b.name!r} clashes with a vars declaration")
                dims[b.name] = b.dimension
        ctx = ParameterContext.of(self.used_values)
        guards = [(n, d, self.resolve(g, ctx, {n: (0, d)})) for n, d, g, _ in varsets]
        fams = []
        for r, bindings, g in families:
            blocks, offset = {}, 0
            for b, s in bindings:
                if s.text not in dims:
                    self.error(s, f"unknown builder {s.text!r}")
                dim = dims.get(s.text, 0)
                blocks[b.text] = (offset, dim)
                offset += dim
            fams.append(ConstraintFamily(r, tuple((b.text, s.text) for b, s in bindings),
                                         self.resolve(g, ctx, blocks)))
        if self.diags:
            raise DslError(self.diags)
        builders = [SetBuilder(n, d, g, ctx) for n, d, g in guards]
        domain = FiniteDomain(tuple(elements), interp)
        result = InstanceFile(atoms, domain, Signature(tuple(relations)), builders, fams, ctx,
                              machines, options)
        for mb in machines:
            if mb.relation is not None:
                if mb.relation not in self.relations:
                    self.diags.append(f"machine {mb.name}: unknown relation {mb.relation!r}")
                elif self.relations[mb.relation] != 2:
                    self.diags.append(f"machine {mb.name}: edge relation {mb.relation!r} must be binary")
        if not self.diags:
            try:
                inst = result.instance
            except ValueError as e:
                raise DslError([f"semantic: {e}"]) from None
            self.diags.extend(f"semantic: {d}" for d in validate(inst))
        if self.diags:
            raise DslError(self.diags)
        return result

    def resolve(self, f, ctx: ParameterContext, blocks: dict):
        """Replace raw parameter values and ``name.i`` references by indexed terms."""
        def fix(t):
            if isinstance(t, _Value):
                return F.Param(ctx.index(t.value))
            if isinstance(t, _Ref):
                offset, dim = blocks.get(t.name, (0, 0))
                if t.name in blocks and not 1 <= t.index <= dim:
                    self.error(t.tok, f"position {t.tok.text}.{t.index} out of range (dimension {dim})")
                return F.Pos(offset + t.index)
            return t
        return _map_terms(f, fix)

    def binding(self):
        b = self.ident()
        self.take(":")
        return b, self.ident()

    def where(self, scope):
        if not self.peek("where"):
            return F.TRUE
        self.take("where")
        return self.disjunction(scope)

    # formulas
    def disjunction(self, scope):
        args = [self.conjunction(scope)]
        while self.peek("|"):
            self.take("|")
            args.append(self.conjunction(scope))
        return args[0] if len(args) == 1 else F.Or(tuple(args))

    def conjunction(self, scope):
        args = [self.negation(scope)]
        while self.peek("&"):
            self.take("&")
            args.append(self.negation(scope))
        return args[0] if len(args) == 1 else F.And(tuple(args))

    def negation(self, scope):
        if self.peek("!"):
            self.take("!")
            return F.Not(self.negation(scope))
        if self.peek("("):
            self.take("(")
            f = self.disjunction(scope)
            self.take(")")
            return f
        if self.peek("true") or self.peek("false"):
            return F.Bool(self.take().text == "true")
        left = self.term(scope)
        op = self.tok
        if op.text not in F.OPS:
            raise DslError([f"{op.at()}: expected a comparator, found {op.text or 'end of file'!r}"])
        self.i += 1
        if self.atoms == "equality" and op.text not in F.EQUALITY_OPS:
            self.error(op, f"comparator {op.text!r} is not allowed over equality atoms")
        right = self.term(scope)
        return F.Cmp(op.text, left, right)

    @property
    def used_values(self):
        return getattr(self, "_used", set())

    def term(self, scope):
        t = self.tok
        if t.text == "#":
            self.take("#")
            k = self.integer()
            if not 1 <= k <= len(self.declared):
                self.error(t, f"parameter #{k} not declared")
                return F.Param(0)
            return self._param(self.declared[k - 1])
        if t.kind == "num":
            self.i += 1
            return self._param(atom(t.text))
        name = self.ident()
        self.take(".")
        idx = self.integer()
        if name.text not in scope:
            self.error(name, f"unknown tuple name {name.text!r}")
        return _Ref(scope.get(name.text, name.text), idx, name)

    def _param(self, value):
        if not hasattr(self, "_used"):
            self._used = set()
        self._used.add(value)
        return _Value(value)

    # machines
    def machine(self) -> MachineBlock:
        self.take("machine")
        name = self.ident()
        relation = None
        if self.peek("edges"):
            self.take("edges")
            relation = self.ident().text
        self.take("{")
        registers, states, transitions = [], [], []
        if self.peek("registers"):
            self.take("registers")
            while self.tok.kind == "id" and self.tok.text not in KEYWORDS and self.toks[self.i + 1].text != "->":
                registers.append(self.ident().text)
                if self.peek("states"):
                    break
        self.take("states")
        while self.tok.kind == "id" and self.tok.text not in KEYWORDS and self.toks[self.i + 1].text != "->":
            states.append(self.ident().text)
        while not self.peek("}"):
            src = self.ident()
            self.take("->")
            dst = self.ident()
            guard, assign = [], []
            if self.peek("when"):
                self.take("when")
                guard.append(self._cond())
                while self.peek("&"):
                    self.take("&")
                    guard.append(self._cond())
            if self.peek("do"):
                self.take("do")
                assign.append(self._assign())
                while self.peek(","):
                    self.take(",")
                    assign.append(self._assign())
            transitions.append(Transition(src.text, dst.text, tuple(guard), tuple(assign)))
        self.take("}")
        m = RegisterMachine(tuple(states), tuple(registers), tuple(transitions))
        for d in m.validate():
            self.diags.append(f"{name.at()}: machine {name.text}: {d}")
        return MachineBlock(name.text, m, relation)

    def _cond(self):
        reg = self.ident()
        op = self.tok
        if op.text not in F.EQUALITY_OPS:
            raise DslError([f"{op.at()}: machine guards use = or !=, found {op.text!r}"])
        self.i += 1
        self.take("in")
        return reg.text, op.text

    def _assign(self):
        reg = self.ident()
        self.take(":=")
        if self.peek("_"):
            self.take("_")
            return reg.text, None
        self.take("in")
        return reg.text, INPUT


@dataclass(frozen=True)
class _Value:
    """Parameter term holding its raw value until the context is known."""

    value: Fraction


@dataclass(frozen=True)
class _Ref:
    """``name.i`` reference awaiting the block layout."""

    name: str
    index: int
    tok: Tok = field(compare=False)


def _map_terms(f, fix):
    if isinstance(f, F.Cmp):
        return F.Cmp(f.op, fix(f.left), fix(f.right))
    if isinstance(f, F.And):
        return F.And(tuple(_map_terms(a, fix) for a in f.args))
    if isinstance(f, F.Or):
        return F.Or(tuple(_map_terms(a, fix) for a in f.args))
    if isinstance(f, F.Not):
        return F.Not(_map_terms(f.arg, fix))
    return f


def parse(text: str) -> InstanceFile:
    """Parse an instance file; raises ``DslError`` with ``line:col`` diagnostics."""
    return _Parser(text).parse()


def load(path) -> InstanceFile:
    with open(path) as fh:
        return parse(fh.read())


def _term_printer(blocks: list[tuple[str, int]]):
    def term(t):
        if isinstance(t, F.Param):
            return f"#{t.index}"
        i = t.index
        for name, dim in blocks:
            if i <= dim:
                return f"{name}.{i}"
            i -= dim
        raise IndexError(t)
    return term


def format_instance(f: InstanceFile) -> str:
    """Canonical text of ``f``; ``parse(format_instance(f))`` reproduces it."""
    out = [f"atoms {f.atoms}"]
    if f.ctx.params:
        out.append("params { " + " ".join(format_atom(p) for p in f.ctx.params) + " }")
    out.append("domain { " + " ".join(f.domain.elements) + " }")
    for name, k in f.signature.relations:
        tuples = sorted(f.domain.relations.get(name, ()),
                        key=lambda t: [f.domain.elements.index(e) for e in t])
        body = " ".join("(" + ",".join(t) + ")" for t in tuples)
        out.append(f"relation {name}/{k} = {{ {body} }}".replace("{  }", "{ }"))
    dims = {}
    for b in f.varsets:
        dims[b.name] = b.dimension
        guard = F.format_formula(b.guard, _term_printer([("x", b.dimension)]))
        out.append(f"vars {b.name}({b.dimension}) where {guard}")
    for mb in f.machines:
        for b in compile_machine(mb.machine).variables.builders:
            dims[b.name] = b.dimension
    for fam in f.families:
        blocks = [(b, dims[s]) for b, s in fam.scope]
        scope = ", ".join(f"{b} : {s}" for b, s in fam.scope)
        guard = F.format_formula(fam.guard, _term_printer(blocks))
        out.append(f"constraint {fam.relation} on {scope} where {guard}")
    for mb in f.machines:
        m = mb.machine
        head = f"machine {mb.name}" + (f" edges {mb.relation}" if mb.relation else "") + " {"
        out.append(head)
        if m.registers:
            out.append("  registers " + " ".join(m.registers))
        out.append("  states " + " ".join(m.states))
        out.extend(f"  {t}" for t in m.transitions)
        out.append("}")
    for k, v in f.options.items():
        out.append(f"option {k} = {v}")
    return "\n".join(out) + "\n"
