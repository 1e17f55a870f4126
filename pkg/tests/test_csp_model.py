from fractions import Fraction

import pytest

from defcsp import formulas as F
from defcsp.atoms import ParameterContext
from defcsp.csp_model import (ConstraintFamily, DefinableInstance, FiniteDomain, InvalidInstance,
                              Signature, ground, instance_support, require_valid, to_dot, validate,
                              vertex_label)
from defcsp.defsets import DefinableSet, SetBuilder

p = F.Pos
NEQ3 = FiniteDomain(("Y", "G", "B"), {"neq": {(a, b) for a in "YGB" for b in "YGB" if a != b}})


def tiny(**kw):
    args = dict(signature=Signature((("neq", 2),)), domain=NEQ3,
                variables=DefinableSet((SetBuilder("V", 1),)),
                families=(ConstraintFamily("neq", (("u", "V"), ("v", "V")), F.lt(p(1), p(2))),))
    args.update(kw)
    return DefinableInstance(**args)


def test_valid_instance_has_no_diagnostics():
    assert validate(tiny()) == []


def test_diagnostics():
    bad_sig = tiny(signature=Signature((("neq", 2), ("neq", 2))))
    assert any("duplicate relation" in d for d in validate(bad_sig))
    assert any("has no interpretation" in d for d in validate(tiny(signature=Signature((("neq", 2), ("r", 1))))))
    fam = ConstraintFamily("neq", (("u", "W"), ("v", "V")))
    assert any("unknown builder 'W'" in d for d in validate(tiny(families=(fam,))))
    fam = ConstraintFamily("neq", (("u", "V"),))
    assert any("scope has 1 blocks" in d for d in validate(tiny(families=(fam,))))
    fam = ConstraintFamily("neq", (("u", "V"), ("v", "V")), F.eq(p(1), p(3)))
    assert any("guard arity mismatch" in d for d in validate(tiny(families=(fam,))))
    assert any("comparator '<'" in d for d in validate(tiny(atoms="equality")))
    assert any("empty domain" in d for d in validate(tiny(domain=FiniteDomain((), {"neq": set()}))))
    ctx = ParameterContext((Fraction(1),))
    assert any("parameter context" in d for d in validate(tiny(ctx=ctx)))
    with pytest.raises(InvalidInstance) as e:
        require_valid(tiny(atoms="real"))
    assert "unknown atom theory" in str(e.value)


def test_example1_ground_over_five(example1):
    g = ground(example1, range(1, 6))
    assert len(g.vertices) == 20
    idx = g.index()
    a = idx[("V", (Fraction(1), Fraction(2)))]
    b = idx[("V", (Fraction(2), Fraction(3)))]
    assert ("neq", (a, b)) in g.constraints


@pytest.mark.parametrize("n", range(0, 6))
def test_example1_vertex_count(example1, n):
    assert len(ground(example1, range(n)).vertices) == n * (n - 1)


def test_grounding_is_monotone_and_restricts(example1):
    small = ground(example1, [1, 2, 4])
    big = ground(example1, range(1, 6))
    idx = big.index()
    keep = [idx[v] for v in small.vertices]
    restricted = big.induced(keep)
    assert restricted.vertices == small.vertices
    assert sorted(restricted.constraints) == sorted(small.constraints)


def test_every_ground_constraint_satisfies_its_guard(example1):
    g = ground(example1, range(1, 5))
    fam = example1.families[0]
    for _, (i, j) in g.constraints:
        assert F.eval_ground(fam.guard, g.vertices[i][1] + g.vertices[j][1])


def test_instance_support():
    ctx = ParameterContext((Fraction(0), Fraction(5)))
    b = SetBuilder("V", 1, F.lt(p(1), F.Param(2)), ctx)
    inst = tiny(variables=DefinableSet((b,)), ctx=ctx)
    assert instance_support(inst) == ParameterContext((Fraction(5),))
    assert instance_support(tiny()) == ParameterContext()


def test_ground_includes_parameters():
    ctx = ParameterContext((Fraction(7),))
    inst = tiny(variables=DefinableSet((SetBuilder("V", 1, F.TRUE, ctx),)), ctx=ctx)
    assert ground(inst, [1]).pool == (Fraction(1), Fraction(7))


def test_labels_and_dot(example1):
    g = ground(example1, range(1, 4))
    assert vertex_label(g.vertices[0]) == "V(1,2)"
    dot = to_dot(g)
    assert dot.startswith("digraph ground {") and dot.count("->") == len(g.constraints)
