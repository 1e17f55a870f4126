import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from defcsp.csp_model import FiniteDomain, GroundInstance
from defcsp.finite_solver import (BruteForceBoundExceeded, CnfFormula, brute_force, count_solutions,
                                  decode, dpll, encode_tsc, free_boolean_algebra, is_homomorphism,
                                  prime_ideal, BooleanAlgebra, solve, to_dimacs)


def colouring(k):
    names = tuple("c%d" % i for i in range(k))
    return FiniteDomain(names, {"neq": {(a, b) for a in names for b in names if a != b}})


def graph(n, edges):
    return GroundInstance(tuple(("V", (i,)) for i in range(n)), tuple(("neq", e) for e in edges), (), None)


K4 = graph(4, list(itertools.combinations(range(4), 2)))


def test_encoding_counts():
    cnf = encode_tsc(graph(2, [(0, 1)]), colouring(3))
    assert (cnf.nvars, cnf.n_totality, cnf.n_single, cnf.n_constraint) == (6, 2, 6, 3)


def test_dpll_examples():
    assert dpll(CnfFormula(1, [[1], [-1]])) is None
    assert dpll(CnfFormula(2, [[1, 2], [-1]])) == {1: False, 2: True}
    assert dpll(CnfFormula(0, [])) == {}
    assert dpll(CnfFormula(1, [[]])) is None


def test_pigeonhole_four_into_three():
    holes, pigeons = 3, 4
    v = lambda p, h: p * holes + h + 1
    clauses = [[v(p, h) for h in range(holes)] for p in range(pigeons)]
    clauses += [[-v(p, h), -v(q, h)] for h in range(holes) for p, q in itertools.combinations(range(pigeons), 2)]
    assert dpll(CnfFormula(pigeons * holes, clauses)) is None


def _eval(cnf, val):
    return all(any(val[abs(l)] == (l > 0) for l in c) for c in cnf.clauses)


@settings(max_examples=300)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.lists(
    st.lists(st.integers(1, n).flatmap(lambda x: st.sampled_from([x, -x])), min_size=1, max_size=3),
    max_size=25))))
def test_dpll_matches_truth_tables(case):
    n, clauses = case
    cnf = CnfFormula(n, clauses)
    sol = dpll(cnf)
    exists = any(_eval(cnf, dict(enumerate(bits, 1))) for bits in itertools.product([False, True], repeat=n))
    assert (sol is not None) == exists
    if sol is not None:
        assert _eval(cnf, sol)


def test_decode_and_malformed():
    g = graph(2, [(0, 1)])
    d = colouring(2)
    assert decode(dpll(encode_tsc(g, d)), g, d) in (["c0", "c1"], ["c1", "c0"])
    with pytest.raises(ValueError):
        decode({1: True, 2: True, 3: False, 4: True}, g, d)


def test_brute_force_on_k4():
    assert brute_force(K4, colouring(3)) is None
    assert solve(K4, colouring(3)) is None
    assert count_solutions(K4, colouring(4)) == 24
    with pytest.raises(BruteForceBoundExceeded):
        brute_force(K4, colouring(3), bound=10)


def test_solve_agrees_with_brute_force_on_random_graphs():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 7)
        edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.5]
        d = colouring(rng.randint(1, 3))
        g = graph(n, edges)
        assert (solve(g, d) is None) == (brute_force(g, d) is None)


def test_dimacs_header():
    cnf = encode_tsc(graph(2, [(0, 1)]), colouring(3))
    text = to_dimacs(cnf, ["a", "b"], ["r", "g", "b"])
    assert "p cnf 6 11" in text.splitlines()
    assert "c 1 = (a, r)" in text


@pytest.mark.parametrize("n, homs", [(1, 2), (2, 4)])
def test_prime_ideal(n, homs):
    ba = free_boolean_algebra(n)
    assert ba.law_violations() == []
    h = prime_ideal(ba)
    assert is_homomorphism(ba, h)
    all_h = [h for h in itertools.product((0, 1), repeat=ba.size) if is_homomorphism(ba, h)]
    assert len(all_h) == homs


def test_prime_ideal_rejects_bad_tables():
    with pytest.raises(ValueError):
        prime_ideal(BooleanAlgebra(1, 0, ((0,),), (0,)))
    broken = BooleanAlgebra(2, 1, ((0, 0), (0, 0)), (1, 0))
    with pytest.raises(ValueError):
        prime_ideal(broken)
