"""Independent reference implementations used only by the tests."""
import itertools
from fractions import Fraction


def weak_orders(n_elements):
    """Every weak order on ``n_elements`` as a dense rank vector, by filtering all maps."""
    out = []
    for ranks in itertools.product(range(max(n_elements, 1)), repeat=n_elements):
        if set(ranks) == set(range(len(set(ranks)))):
            out.append(ranks)
    return out


def types_by_brute_force(arity, nparams):
    """Rank vectors over positions + parameters with the parameters strictly increasing."""
    out = set()
    for ranks in weak_orders(arity + nparams):
        pr = ranks[arity:]
        if all(a < b for a, b in zip(pr, pr[1:])):
            out.add(ranks)
    return out


def ordered_bell(n):
    return len(weak_orders(n))


def order_type(values):
    """Pairwise comparison table: a different encoding of the complete type of a tuple."""
    return tuple((a > b) - (a < b) for a, b in itertools.product(values, repeat=2))


def all_maps(n, elements):
    return itertools.product(elements, repeat=n)


def satisfiable_by_enumeration(n, elements, constraints, relations):
    """Plain enumeration with no pruning; for small instances only."""
    for values in all_maps(n, elements):
        if all(tuple(values[i] for i in idx) in relations[r] for r, idx in constraints):
            return True
    return False


def pool_atoms(k):
    return [Fraction(i) for i in range(1, k + 1)]
