"""Finite CSP engine.

A finite CSP is anything with ``vertices`` and ``constraints`` (relation name,
vertex-index tuple); values come from a ``FiniteDomain``. Satisfiability is
decided by a propositional encoding over the variables ``(vertex, value)``:

* totality: each vertex takes some value,
* single-valuedness: no vertex takes two values,
* constraints: for every constraint and every value tuple outside the
  relation, not all of those assignments at once,

solved by a small DPLL. ``brute_force`` is an independent exhaustive search
that never touches the encoding.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .csp_model import FiniteDomain, GroundInstance

DEFAULT_BRUTE_BOUND = 10 ** 7


class BruteForceBoundExceeded(RuntimeError):
    pass


@dataclass
class CnfFormula:
    nvars: int
    clauses: list[list[int]]
    n_totality: int = 0
    n_single: int = 0
    n_constraint: int = 0
    labels: dict = field(default_factory=dict)  # var -> (vertex index, value index)

    def __post_init__(self):
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.nvars:
                    raise ValueError(f"literal {lit} out of range for {self.nvars} variables")


def var(vertex: int, value: int, ndom: int) -> int:
    return vertex * ndom + value + 1


def encode_tsc(g, domain: FiniteDomain) -> CnfFormula:
    n, d = len(g.vertices), len(domain)
    clauses = []
    for v in range(n):
        clauses.append([var(v, i, d) for i in range(d)])
    n_t = len(clauses)
    for v in range(n):
        for i, j in itertools.combinations(range(d), 2):
            clauses.append([-var(v, i, d), -var(v, j, d)])
    n_s = len(clauses) - n_t
    index = {e: i for i, e in enumerate(domain.elements)}
    for rel, idx in g.constraints:
        allowed = {tuple(index[e] for e in t) for t in domain.relations[rel]}
        for values in itertools.product(range(d), repeat=len(idx)):
            if values in allowed:
                continue
            clause = list(dict.fromkeys(-var(v, val, d) for v, val in zip(idx, values)))
            clauses.append(clause)
    labels = {var(v, i, d): (v, i) for v in range(n) for i in range(d)}
    return CnfFormula(n * d, clauses, n_t, n_s, len(clauses) - n_t - n_s, labels)


def dpll(cnf: CnfFormula) -> dict[int, bool] | None:
    """Satisfying valuation of every variable, or ``None`` when unsatisfiable.

    Unit propagation over occurrence lists; branch on the lowest unassigned
    variable, trying ``True`` first.
    """
    n = cnf.nvars
    clauses = [list(dict.fromkeys(c)) for c in cnf.clauses]
    if any(not c for c in clauses):
        return None
    occurs: dict[int, list[int]] = {}
    for ci, c in enumerate(clauses):
        for lit in c:
            occurs.setdefault(lit, []).append(ci)
    value: list[bool | None] = [None] * (n + 1)
    trail: list[int] = []

    def lit_val(lit):
        v = value[abs(lit)]
        return None if v is None else (v if lit > 0 else not v)

    def assign(lit):
        value[abs(lit)] = lit > 0
        trail.append(abs(lit))

    def propagate(queue):
        while queue:
            lit = queue.pop()
            cur = lit_val(lit)
            if cur is False:
                return False
            if cur is None:
                assign(lit)
            for ci in occurs.get(-lit, ()):
                unassigned, sat = None, False
                count = 0
                for l2 in clauses[ci]:
                    lv = lit_val(l2)
                    if lv is True:
                        sat = True
                        break
                    if lv is None:
                        count += 1
                        unassigned = l2
                if sat:
                    continue
                if count == 0:
                    return False
                if count == 1:
                    queue.append(unassigned)
        return True

    def undo(mark):
        while len(trail) > mark:
            value[trail.pop()] = None

    if not propagate([c[0] for c in clauses if len(c) == 1]):
        return None
    # explicit stack of (trail mark, variable, next value to try or None when exhausted)
    stack = []
    while True:
        v = next((i for i in range(1, n + 1) if value[i] is None), None)
        if v is None:
            if all(any(lit_val(l) for l in c) for c in clauses):
                return {i: bool(value[i]) for i in range(1, n + 1)}
            ok = False
        else:
            mark = len(trail)
            stack.append((mark, v))
            ok = propagate([v])
            if ok:
                continue
        # conflict: backtrack to the most recent decision still having the False branch
        while True:
            if not stack:
                return None
            mark, v = stack.pop()
            undo(mark)
            if v > 0:
                stack.append((mark, -v))
                if propagate([-v]):
                    break
                continue


def decode(val: dict[int, bool], g, domain: FiniteDomain) -> list[str]:
    """Vertex-indexed values from a valuation satisfying the encoding."""
    d = len(domain)
    out = []
    for v in range(len(g.vertices)):
        chosen = [i for i in range(d) if val.get(var(v, i, d))]
        if len(chosen) != 1:
            raise ValueError(f"malformed valuation: vertex {v} takes {len(chosen)} values")
        out.append(domain.elements[chosen[0]])
    return out


def satisfies(g, domain: FiniteDomain, assignment: Sequence[str]) -> bool:
    return all(domain.holds(rel, [assignment[i] for i in idx]) for rel, idx in g.constraints)


def solve(g, domain: FiniteDomain) -> list[str] | None:
    """Encode, run DPLL, decode and re-check every constraint directly."""
    val = dpll(encode_tsc(g, domain))
    if val is None:
        return None
    assignment = decode(val, g, domain)
    if not satisfies(g, domain, assignment):
        raise AssertionError("decoded assignment violates a constraint")
    return assignment


def _search(g, domain: FiniteDomain, bound: int, count_all: bool):
    n, d = len(g.vertices), len(domain)
    if d ** n > bound:
        raise BruteForceBoundExceeded(f"|D|^|V| = {d}^{n} exceeds the bound {bound}")
    # constraints become checkable once their highest vertex is assigned
    due: list[list] = [[] for _ in range(n)]
    for rel, idx in g.constraints:
        if not idx:
            continue
        due[max(idx)].append((domain.relations[rel], idx))
    empty_violated = any(not idx and () not in domain.relations[rel] for rel, idx in g.constraints)
    if empty_violated:
        return 0 if count_all else None
    assignment: list[str | None] = [None] * n
    found = 0

    def rec(i):
        nonlocal found
        if i == n:
            found += 1
            return not count_all
        for e in domain.elements:
            assignment[i] = e
            if all(tuple(assignment[j] for j in idx) in rel for rel, idx in due[i]):
                if rec(i + 1):
                    return True
        assignment[i] = None
        return False

    if count_all:
        rec(0)
        return found
    return list(assignment) if rec(0) else None


def brute_force(g, domain: FiniteDomain, bound: int = DEFAULT_BRUTE_BOUND) -> list[str] | None:
    """Exhaustive search over all ``|D|^|V|`` maps, pruning as soon as a constraint fails."""
    return _search(g, domain, bound, count_all=False)


def count_solutions(g, domain: FiniteDomain, bound: int = DEFAULT_BRUTE_BOUND) -> int:
    return _search(g, domain, bound, count_all=True)


def to_dimacs(cnf: CnfFormula, vertex_names: Sequence[str] = (), value_names: Sequence[str] = ()) -> str:
    lines = ["c T/S/C encoding: variable -> (vertex, value)"]
    for v in range(1, cnf.nvars + 1):
        vi, di = cnf.labels.get(v, (None, None))
        vname = vertex_names[vi] if vi is not None and vi < len(vertex_names) else vi
        dname = value_names[di] if di is not None and di < len(value_names) else di
        lines.append(f"c {v} = ({vname}, {dname})")
    lines.append(f"p cnf {cnf.nvars} {len(cnf.clauses)}")
    lines.extend(" ".join(map(str, c + [0])) for c in cnf.clauses)
    return "\n".join(lines) + "\n"


# Boolean algebras as relational structures -----------------------------------

@dataclass(frozen=True)
class BooleanAlgebra:
    """Finite algebra ``(B, 1, and, not)`` given by operation tables over ``0..n-1``."""

    size: int
    top: int
    meet: tuple[tuple[int, ...], ...]
    neg: tuple[int, ...]

    @property
    def bottom(self) -> int:
        return self.neg[self.top]

    def join(self, a, b):
        return self.neg[self.meet[self.neg[a]][self.neg[b]]]

    def law_violations(self) -> list[str]:
        B = range(self.size)
        m, n = self.meet, self.neg
        out = []
        if len(m) != self.size or any(len(r) != self.size for r in m) or len(n) != self.size:
            return ["table shapes do not match the size"]
        for a in B:
            if m[a][a] != a:
                out.append(f"meet not idempotent at {a}")
            if m[a][self.top] != a:
                out.append(f"1 is not greatest: {a} & 1 != {a}")
            if n[n[a]] != a:
                out.append(f"not not {a} != {a}")
            if m[a][n[a]] != self.bottom:
                out.append(f"{a} & not {a} != 0")
            for b in B:
                if m[a][b] != m[b][a]:
                    out.append(f"meet not commutative at {a},{b}")
                for c in B:
                    if m[a][m[b][c]] != m[m[a][b]][c]:
                        out.append(f"meet not associative at {a},{b},{c}")
                    if m[a][self.join(b, c)] != self.join(m[a][b], m[a][c]):
                        out.append(f"not distributive at {a},{b},{c}")
        return out


def free_boolean_algebra(generators: int) -> BooleanAlgebra:
    """Free algebra on ``generators`` generators: subsets of the ``2**generators`` atoms, as bitmasks."""
    size = 2 ** (2 ** generators)
    full = size - 1
    meet = tuple(tuple(a & b for b in range(size)) for a in range(size))
    return BooleanAlgebra(size, full, meet, tuple(full ^ a for a in range(size)))


TWO = FiniteDomain(
    ("0", "1"),
    {
        "top": {("1",)},
        "and": {(a, b, str(int(a) & int(b))) for a in "01" for b in "01"},
        "not": {("0", "1"), ("1", "0")},
    },
)


def algebra_instance(ba: BooleanAlgebra) -> GroundInstance:
    """The relational presentation ``top/1``, ``and/3``, ``not/2`` as a finite instance."""
    cons = [("top", (ba.top,))]
    cons += [("and", (a, b, ba.meet[a][b])) for a in range(ba.size) for b in range(ba.size)]
    cons += [("not", (a, ba.neg[a])) for a in range(ba.size)]
    return GroundInstance(tuple(("B", (a,)) for a in range(ba.size)), tuple(cons), (), TWO)


def is_homomorphism(ba: BooleanAlgebra, h: Sequence[int]) -> bool:
    B = range(ba.size)
    return (h[ba.top] == 1
            and all(h[ba.meet[a][b]] == (h[a] & h[b]) for a in B for b in B)
            and all(h[ba.neg[a]] == 1 - h[a] for a in B))


def prime_ideal(ba: BooleanAlgebra) -> list[int]:
    """A homomorphism onto the two-element algebra; its kernel is a prime ideal."""
    if ba.size < 2 or ba.top == ba.bottom:
        raise ValueError("trivial Boolean algebra (0 = 1) has no homomorphism to 2")
    bad = ba.law_violations()
    if bad:
        raise ValueError(f"tables violate the Boolean algebra laws: {bad[0]}")
    g = algebra_instance(ba)
    assignment = solve(g, TWO)
    if assignment is None:
        raise AssertionError("no homomorphism to 2 for a non-trivial Boolean algebra")
    h = [int(x) for x in assignment]
    if not is_homomorphism(ba, h):
        raise AssertionError("solver returned a map that is not a homomorphism")
    return h
