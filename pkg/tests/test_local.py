import math

import pytest
from hypothesis import given, settings, strategies as st

from rdplab.fields import field
from rdplab.local import (
    INFINITE, Inconclusive, NonIsolatedSingularity, colength, derivation_kernel, ideal_membership, kernel,
    rank, tjurina,
)
from rdplab.poly import MultiPoly, parse_poly
from rdplab.derivations import Derivation

from oracles import global_colength, monomial_colength


def P(text, p):
    return parse_poly(text, p)


@pytest.mark.parametrize("text,p,tau", [
    ("x*y+z^4", 2, 4),
    ("z^2+x^3+y^5", 5, 10),
    ("z^2+x^3+y^5", 3, 12),
    ("z^2+x^3+y^5", 2, 16),
    ("z^2+x^3+x*y^3", 3, 9),
    ("z^2+x^3+y^2*z", 2, 8),
    ("z^2+x^3+y^4", 3, 9),
    ("x*y+z^2", 7, 1),
])
def test_tjurina_hand_values(text, p, tau):
    assert tjurina(P(text, p)) == tau


@pytest.mark.parametrize("text,p", [
    ("x*y+z^4", 2), ("z^2+x^3+y^5", 5), ("z^2+x^3+y^5", 3), ("z^2+x^3+y^5", 2), ("z^2+x^3+y^4", 3),
    ("z^2+x^3+x*y^3", 3), ("z^2+x^3+y^5", 7), ("z^2+x^2*y+y^5", 3), ("x*y+z^6", 3),
])
def test_tjurina_matches_groebner_oracle(text, p):
    # weighted homogeneous: the origin is the only singular point
    f = P(text, p)
    gens = [f] + [f.partial(v) for v in "xyz"]
    assert tjurina(f) == global_colength(gens, p)


def test_colength_examples():
    F3 = 3
    assert colength([P("x", F3), P("y", F3), P("z", F3)]) == 1
    assert colength([P("x^2", 2), P("y^4", 2), P("z^2", 2)]) == 16
    assert colength([P("x", 3), P("y", 3)]) == INFINITE
    assert colength([P("1+x", 3)]) == 0


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)), max_size=4),
       st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4)))
@settings(max_examples=40, deadline=None)
def test_colength_of_monomial_ideals(extra, powers):
    F = field(3)
    exps = [(powers[0], 0, 0), (0, powers[1], 0), (0, 0, powers[2])] + [e for e in extra if any(e)]
    gens = [MultiPoly.monomial(e, F) for e in exps]
    assert colength(gens) == monomial_colength(exps)


def test_colength_is_unit_invariant():
    f = P("z^2+x^3+y^5", 5)
    gens = [f] + [f.partial(v) for v in "xyz"]
    unit = P("1+x+y*z", 5)
    assert colength([g * unit for g in gens]) == colength(gens)


def test_non_isolated_raises():
    with pytest.raises(NonIsolatedSingularity):
        tjurina(P("x*y", 3))
    with pytest.raises(ValueError):
        tjurina(P("1+x", 3))


def test_ideal_membership_examples():
    f = P("z^2+x^3+y^5", 2)
    assert ideal_membership(P("z^2", 2), [f, P("x^2", 2), P("y^4", 2)])
    assert not ideal_membership(P("x", 3), [P("x^2", 3), P("y", 3)])
    assert ideal_membership(f, [f])
    assert ideal_membership(P("x^5*y", 3), [P("x^2", 3)])


def _in_span(D, basis, p):
    """Does D lie in the F_p-span of basis (coefficient vectors by monomial)?"""
    F = field(p)
    keys = {}

    def vec(d):
        out = {}
        for k, c in enumerate(d.polys()):
            for e, a in c.terms.items():
                out[keys.setdefault((k, e), len(keys))] = a
        return out
    vb = [vec(b) for b in basis]
    return rank(vb + [vec(D)], F) == rank(vb, F)


def test_derivation_kernel_examples():
    for n, p in [(3, 2), (2, 3), (4, 5)]:
        ker = derivation_kernel(P(f"x*y+z^{n + 1}", p), degree_bound=2)
        assert _in_span(Derivation.parse(("0", "0", "1"), p), ker, p)
        assert _in_span(Derivation.parse(("x", "-y", "0"), p), ker, p)
    ker = derivation_kernel(P("z^2+x^3+y^5", 5), degree_bound=2)
    assert _in_span(Derivation.parse(("0", "1", "0"), 5), ker, 5)
    assert _in_span(Derivation.parse(("2*z", "0", "-3*x^2"), 5), ker, 5)
    ker = derivation_kernel(P("z^2+x^3+y^4", 3), degree_bound=3)
    assert _in_span(Derivation.parse(("1", "0", "0"), 3), ker, 3)
    assert _in_span(Derivation.parse(("0", "z", "y^3"), 3), ker, 3)


def test_kernel_and_rank():
    F = field(5)
    vecs = [{0: 1, 1: 2}, {0: 2, 1: 4}, {2: 1}]
    assert rank(vecs, F) == 2
    ker = kernel(vecs, F)
    assert len(ker) == 1
