"""Decide a definable instance by solving the finite CSP on its orbits.

Over (Q, <) a definable instance with a finite domain has a solution iff it
has one that is invariant under the automorphisms fixing its parameters.
Such a solution is constant on orbits, so it is a homomorphism from the
finite orbit quotient: one variable per orbit of V, one constraint per
orbit of each constraint family, obtained by restricting the family's
complete type onto each scope block.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from . import formulas as F
from .atoms import ParameterContext, format_atom, restrict_type, type_of
from .csp_model import (DefinableInstance, FiniteDomain, GroundInstance, InvalidInstance,
                        instance_support, require_valid)
from .defsets import Orbit, orbits
from .finite_solver import solve


class InconsistentFamily(InvalidInstance):
    """A family guard admits a block tuple outside its builder."""


@dataclass(frozen=True)
class OrbitCsp:
    variables: tuple[Orbit, ...]
    constraints: tuple[tuple[str, tuple[int, ...]], ...]

    @property
    def vertices(self):
        return self.variables


@dataclass(frozen=True)
class DefinableSolution:
    assignment: dict  # Orbit -> domain element, in orbit order
    support: ParameterContext

    def value(self, builder: str, tup) -> str:
        return self.assignment[Orbit(builder, type_of(tup, self.support))]

    def to_json(self) -> dict:
        return {
            "status": "sat",
            "support": [format_atom(a) for a in self.support.params],
            "assignment": [{"builder": o.builder, "orbit": str(o.otype), "value": v}
                           for o, v in self.assignment.items()],
        }


def effective_guard(instance: DefinableInstance, fam) -> F.Formula:
    """Family guard conjoined with each block's builder guard, shifted into place."""
    parts = [fam.guard]
    for name, block in zip(fam.builders, instance.blocks(fam)):
        parts.append(F.shift(instance.variables.builder(name).guard, block[0] - 1 if block else 0))
    return F.conj(*parts)


def reduce(instance: DefinableInstance, strict: bool = False) -> OrbitCsp:
    """Orbit quotient of ``instance``.

    Constraints range over block tuples that are members of V, as grounding
    does. With ``strict`` the family guard alone must imply membership;
    any type where it does not is reported as ``InconsistentFamily``.
    """
    require_valid(instance)
    variables = orbits(instance.variables)
    index = {o: i for i, o in enumerate(variables)}
    ctx = instance.ctx
    constraints = set()
    problems = []
    for fam in instance.families:
        blocks = instance.blocks(fam)
        guard = fam.guard if strict else effective_guard(instance, fam)
        for t in F.satisfying_types(guard, instance.family_arity(fam), ctx):
            idx = []
            for name, block in zip(fam.builders, blocks):
                o = Orbit(name, restrict_type(t, block))
                if o not in index:
                    problems.append(f"constraint {fam.relation}: type [{t}] puts a {name} block "
                                    f"in [{o.otype}], which fails the {name} guard")
                    break
                idx.append(index[o])
            else:
                constraints.add((fam.relation, tuple(idx)))
    if problems:
        raise InconsistentFamily(problems)
    return OrbitCsp(tuple(variables), tuple(sorted(constraints)))


def decide(instance: DefinableInstance) -> DefinableSolution | None:
    """A solution constant on orbits, or ``None`` when the instance has no solution at all."""
    ocsp = reduce(instance)
    values = solve(ocsp, instance.domain)
    if values is None:
        return None
    return DefinableSolution(dict(zip(ocsp.variables, values)), instance.ctx)


def verify_on_ground(sol: DefinableSolution, g: GroundInstance, domain: FiniteDomain | None = None) -> bool:
    domain = domain or g.domain
    try:
        values = [sol.value(b, tup) for b, tup in g.vertices]
    except KeyError as e:
        raise AssertionError(f"ground vertex outside every orbit: {e}") from None
    return all(domain.holds(rel, [values[i] for i in idx]) for rel, idx in g.constraints)


def solution_json(instance: DefinableInstance, sol: DefinableSolution | None) -> str:
    if sol is None:
        doc = {"status": "unsat", "support": [format_atom(a) for a in instance.ctx.params],
               "assignment": []}
    else:
        doc = sol.to_json()
    return json.dumps(doc, indent=2) + "\n"


def check_support(instance: DefinableInstance) -> bool:
    """Whether the instance context is exactly the set of parameters its guards use."""
    return instance_support(instance) == instance.ctx
