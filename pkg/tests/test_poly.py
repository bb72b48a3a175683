import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from conicres.errors import DivisionByZero, ParseError, ZeroPolynomial
from conicres.fields import fq_make
from conicres.poly import (Poly, RatFunc, format_poly, is_irreducible, parse_poly, poly_arith, poly_factor,
                           poly_roots, squarefree_decomposition)

F3, F5 = fq_make(3), fq_make(5)


def P(text, F=F3):
    return parse_poly(text, F)


def all_monic(F, deg):
    for low in itertools.product(range(F.q), repeat=deg):
        yield Poly(F, list(low) + [1])


def brute_irreducible(f):
    F = f.field
    for k in range(1, f.degree // 2 + 1):
        for g in all_monic(F, k):
            if (f % g).is_zero():
                return False
    return True


def test_arith_examples():
    assert poly_arith(P("t^2-1", F5), P("t-1", F5), "gcd") == P("t-1", F5)
    assert poly_arith(P("t^3"), None, "derivative").is_zero()
    q, r = poly_arith(P("t^2+1"), P("t+1"), "divrem")
    assert (q, r) == (P("t+2"), P("2"))
    assert q * P("t+1") + r == P("t^2+1")
    assert poly_arith(P("t^2+1"), F3(2), "eval") == F3(2)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        divmod(P("t"), Poly(F3, ()))


def test_factor_examples():
    fac = poly_factor(P("t^2-1"))
    assert fac.factors == ((P("t+1"), 1), (P("t+2"), 1))
    assert is_irreducible(P("t^2+1"))
    assert poly_factor(P("t^2+1")).factors == ((P("t^2+1"), 1),)
    fac = poly_factor(P("t^3*(t+1)^2", F5))
    assert fac.factors == ((P("t", F5), 3), (P("t+1", F5), 2))
    with pytest.raises(ZeroPolynomial):
        poly_factor(Poly(F3, ()))


def test_inseparable_factorization():
    # t^3 - t^... over F_3: (t^3 + 2)^2 = (t + 2)^6 has zero-derivative pieces
    f = P("(t^3+2)^2*(t^2+1)")
    fac = poly_factor(f)
    assert fac.factors == ((P("t+2"), 6), (P("t^2+1"), 1))
    assert fac.expand() == f


@pytest.mark.parametrize("F,deg", [(F3, 2), (F3, 3), (F3, 4), (F5, 2), (F5, 3)])
def test_irreducibility_matches_trial_division(F, deg):
    for f in all_monic(F, deg):
        assert is_irreducible(f) == brute_irreducible(f), f


def test_irreducible_count_over_f9():
    # number of monic irreducible quadratics over F_9 is (81 - 9) / 2
    F9 = fq_make(3, 2)
    assert sum(is_irreducible(f) for f in all_monic(F9, 2)) == 36


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([(3, 1), (5, 1), (7, 1), (3, 2), (13, 1)]), st.data())
def test_factorization_reconstructs(pd, data):
    F = fq_make(*pd)
    cs = data.draw(st.lists(st.integers(0, F.q - 1), min_size=1, max_size=9))
    f = Poly(F, cs)
    if f.is_zero():
        return
    fac = poly_factor(f, random.Random(data.draw(st.integers(0, 10))))
    assert fac.expand() == f
    for g, m in fac.factors:
        assert g.is_monic() and m >= 1 and brute_irreducible(g) if g.degree <= 4 else is_irreducible(g)
    # factor order and content do not depend on the splitting randomness
    assert poly_factor(f, random.Random(99)).factors == fac.factors


def test_squarefree_decomposition():
    f = P("t*(t+1)^2*(t^2+1)^3")
    sf = squarefree_decomposition(f)
    assert sf == [(P("t"), 1), (P("t+1"), 2), (P("t^2+1"), 3)]


def test_roots():
    assert poly_roots(P("t^2-1")) == [F3(1), F3(2)]
    assert poly_roots(P("t^2+1")) == []
    F9 = fq_make(3, 2)
    roots = poly_roots(Poly(F9, [1, 0, 1]))
    assert len(roots) == 2 and all(r * r == F9(-1) for r in roots)


def test_parse_and_format():
    assert format_poly(P("t*(t-1)^2")) == "t^3+t^2+t"
    assert format_poly(P("2t^2 - t + 4", F5)) == "2*t^2+4*t+4"
    assert P("(t+1)(t+2)") == P("t^2+2")
    assert P("t**2") == P("t^2")
    for bad in ("t^", "(t+1", "t+x", "", "t^-1"):
        with pytest.raises(ParseError):
            P(bad)
    F9 = fq_make(3, 2)
    f = parse_poly("g*t+1", F9)
    assert parse_poly(format_poly(f), F9) == f
    with pytest.raises(ParseError):
        P("g*t")


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([(3, 1), (5, 1), (3, 2), (5, 2)]), st.data())
def test_format_parse_roundtrip(pd, data):
    F = fq_make(*pd)
    f = Poly(F, data.draw(st.lists(st.integers(0, F.q - 1), max_size=8)))
    assert parse_poly(format_poly(f), F) == f


def test_ratfunc_reduced_with_monic_denominator():
    r = RatFunc(P("t^2+t"), P("2*t"))
    assert r.num == P("2*t+2") and r.den == P("1")
    r = RatFunc(P("1"), P("2*t+2"))
    assert r.den == P("t+1") and r.num == P("2")
    assert (r * RatFunc(P("2*t+2"))) == RatFunc(P("1"))
