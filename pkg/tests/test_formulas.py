from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from defcsp import formulas as F
from defcsp.atoms import ParameterContext, enumerate_types, parse_type, representative, type_of

p1, p2, p3 = F.Pos(1), F.Pos(2), F.Pos(3)
CTX = ParameterContext((Fraction(0), Fraction(2)))


def formulas(arity, nparams):
    terms = st.one_of(st.builds(F.Pos, st.integers(1, arity)),
                      st.builds(F.Param, st.integers(1, nparams)) if nparams else st.nothing())
    leaves = st.one_of(st.builds(F.Cmp, st.sampled_from(sorted(F.OPS)), terms, terms),
                       st.sampled_from([F.TRUE, F.FALSE]))
    return st.recursive(leaves, lambda sub: st.one_of(
        st.builds(F.Not, sub),
        st.builds(F.And, st.lists(sub, min_size=2, max_size=3).map(tuple)),
        st.builds(F.Or, st.lists(sub, min_size=2, max_size=3).map(tuple))), max_leaves=8)


def test_examples_under_type():
    assert F.eval_under_type(F.ne(p1, p2), parse_type("p1 < p2"))
    contradiction = F.And((F.lt(p1, p2), F.lt(p2, p1)))
    assert not any(F.eval_under_type(contradiction, t) for t in enumerate_types(2))
    t = parse_type("#1 = p1", 1, 1)
    assert F.eval_under_type(F.eq(p1, F.Param(1)), t)
    ctx = ParameterContext((Fraction(7),))
    assert F.eval_ground(F.eq(p1, F.Param(1)), representative(t, ctx), ctx)


def test_satisfying_types_examples():
    assert len(F.satisfying_types(F.ne(p1, p2), 2)) == 2
    assert F.satisfying_types(F.FALSE, 2) == []
    assert len(F.satisfying_types(F.TRUE, 3)) == 13


def test_ground_examples():
    assert F.eval_ground(F.ne(p1, p2), (1, 2))
    assert F.eval_ground(F.lt(p1, F.Param(1)), (1,), ParameterContext((Fraction(2),)))


def test_index_errors():
    with pytest.raises(IndexError):
        F.eval_under_type(F.eq(p1, p3), parse_type("p1 < p2"))
    with pytest.raises(IndexError):
        F.eval_ground(F.eq(p1, F.Param(2)), (1,), ParameterContext((Fraction(0),)))


@settings(max_examples=1000)
@given(formulas(3, 2), st.lists(st.integers(-2, 4).map(Fraction), min_size=3, max_size=3))
def test_ground_agrees_with_type(f, values):
    assert F.eval_ground(f, values, CTX) == F.eval_under_type(f, type_of(values, CTX))


@given(formulas(2, 2))
def test_negation_complements(f):
    sat = F.satisfying_types(f, 2, 2)
    neg = F.satisfying_types(F.Not(f), 2, 2)
    assert not set(sat) & set(neg)
    assert sorted(sat + neg) == enumerate_types(2, 2)


@pytest.mark.parametrize("a, b", [(p1, p2), (p2, p1), (p1, F.Param(1)), (F.Param(2), p2)])
def test_le_is_lt_or_eq(a, b):
    le = F.Cmp("<=", a, b)
    alt = F.Or((F.lt(a, b), F.eq(a, b)))
    for t in enumerate_types(2, 2):
        assert F.eval_under_type(le, t) == F.eval_under_type(alt, t)
        rep = representative(t, CTX)
        assert F.eval_ground(le, rep, CTX) == F.eval_ground(alt, rep, CTX)


def test_shift_and_format():
    f = F.Or((F.And((F.eq(p1, p2), F.ne(p2, F.Param(1)))), F.Not(F.lt(p1, p2))))
    assert F.format_formula(f) == "p1 = p2 & p2 != #1 | !p1 < p2"
    g = F.shift(f, 2)
    assert F.max_position(g) == 4 and F.params_used(g) == {1}


def test_unknown_comparator():
    with pytest.raises(ValueError):
        F.Cmp("~", p1, p2)
