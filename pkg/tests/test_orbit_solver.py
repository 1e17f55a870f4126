from fractions import Fraction

import pytest

from defcsp import formulas as F
from defcsp.atoms import ParameterContext, parse_type
from defcsp.csp_model import ConstraintFamily, DefinableInstance, FiniteDomain, Signature, ground
from defcsp.defsets import DefinableSet, Orbit, SetBuilder
from defcsp.orbit_solver import (DefinableSolution, InconsistentFamily, decide, reduce,
                                 solution_json, verify_on_ground)

p = F.Pos
NEQ2 = FiniteDomain(("a", "b"), {"neq": {("a", "b"), ("b", "a")}})


def pairs_instance(guard, domain=NEQ2):
    return DefinableInstance(Signature((("neq", 2),)), domain,
                             DefinableSet((SetBuilder("V", 2, F.lt(p(1), p(2))),)),
                             (ConstraintFamily("neq", (("u", "V"), ("v", "V")), guard),))


def test_reduce_single_orbit_self_loop():
    # u = (a,b), v = (c,d) with b = c: both blocks land in the one orbit of increasing pairs
    ocsp = reduce(pairs_instance(F.eq(p(2), p(3))))
    assert ocsp.variables == (Orbit("V", parse_type("p1 < p2")),)
    assert ocsp.constraints == (("neq", (0, 0)),)
    assert decide(pairs_instance(F.eq(p(2), p(3)))) is None


def test_reduce_example1(example1):
    ocsp = reduce(example1)
    assert len(ocsp.variables) == 2
    assert ("neq", (0, 0)) in ocsp.constraints
    assert decide(example1) is None


def test_decide_sat_and_verify():
    inst = pairs_instance(F.FALSE)
    sol = decide(inst)
    assert sol is not None
    for n in range(5):
        assert verify_on_ground(sol, ground(inst, range(n)))


def test_verify_detects_corruption():
    dom = FiniteDomain(("a", "b"), {"neq": {("a", "b"), ("b", "a")}})
    inst = DefinableInstance(Signature((("neq", 2),)), dom,
                             DefinableSet((SetBuilder("A", 1, F.lt(p(1), F.Param(1)), ParameterContext((Fraction(0),))),
                                           SetBuilder("B", 1, F.lt(F.Param(1), p(1)), ParameterContext((Fraction(0),))))),
                             (ConstraintFamily("neq", (("u", "A"), ("v", "B"))),),
                             ctx=ParameterContext((Fraction(0),)))
    sol = decide(inst)
    g = ground(inst, [-2, -1, 1, 2])
    assert verify_on_ground(sol, g)
    bad = DefinableSolution({o: "a" for o in sol.assignment}, sol.support)
    assert not verify_on_ground(bad, g)
    assert verify_on_ground(bad, ground(inst, []))


def test_strict_mode_reports_inconsistent_family():
    with pytest.raises(InconsistentFamily):
        reduce(pairs_instance(F.TRUE), strict=True)
    reduce(pairs_instance(F.lt(p(3), p(4))), strict=False)


def test_determinism_and_renaming(corpus):
    from defcsp.dsl import load
    for path in sorted(corpus.glob("*.csp")):
        inst = load(path).instance
        first, second = solution_json(inst, decide(inst)), solution_json(inst, decide(inst))
        assert first == second
        rename = {e: f"z{i}" for i, e in enumerate(inst.domain.elements)}
        dom = FiniteDomain(tuple(rename.values()),
                           {r: {tuple(rename[e] for e in t) for t in ts} for r, ts in inst.domain.relations.items()})
        renamed = DefinableInstance(inst.signature, dom, inst.variables, inst.families, inst.ctx, inst.atoms)
        assert (decide(renamed) is None) == (decide(inst) is None)
