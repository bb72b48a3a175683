import itertools
import random

import pytest

from conicres.bundles import (A_VANISHING, B_VANISHING, ConicBundle, check_hypotheses, check_reciprocity,
                              component_alpha, remark_13_check, verify_theorem)
from conicres.conics import TernaryForm
from conicres.errors import HypothesisViolation, ZeroInput
from conicres.fields import FqElem, fq_make
from conicres.local import LocalElem
from conicres.places import place_make
from conicres.poly import Poly, RatFunc, parse_poly
from conicres.symbols import hilbert_symbol_tame

F3, F5 = fq_make(3), fq_make(5)


def P(text, F=F3):
    return parse_poly(text, F)


def bundle(a, b, F=F3):
    return ConicBundle.from_polys(P(a, F), P(b, F))


def brute_square(x: FqElem) -> bool:
    return any(FqElem(x.field, y) ** 2 == x for y in range(x.field.q))


def test_components():
    comps = check_hypotheses(P("2"), P("t*(t-1)^2"))
    assert [(str(c.place), c.role, c.tau) for c in comps] == [("t", B_VANISHING, 1), ("t+2", B_VANISHING, 2)]
    comps = check_hypotheses(P("t+1"), P("t^2"))
    assert {(str(c.place), c.role, c.tau) for c in comps} == {("t+1", A_VANISHING, 1), ("t", B_VANISHING, 2)}
    with pytest.raises(HypothesisViolation) as exc:
        check_hypotheses(P("t"), P("t*(t+1)"))
    assert exc.value.factor == P("t")
    with pytest.raises(ZeroInput):
        check_hypotheses(P("0"), P("t"))


def test_component_alpha():
    t = place_make(P("t"), F3)
    assert not component_alpha(t, P("2"), P("t"), B_VANISHING).trivial
    tm1 = place_make(P("t-1", F5), F5)
    assert component_alpha(tm1, P("4", F5), P("t-1", F5), B_VANISHING).trivial
    quad = place_make(P("t^2+1"), F3)
    alpha = component_alpha(quad, P("t"), P("t^2+1"), B_VANISHING)
    tbar = quad.to_canonical(quad.reduce(P("t")))
    assert alpha.trivial == brute_square(tbar)


def test_theorem_examples():
    rep = verify_theorem(bundle("2", "t*(t-1)^2"))
    assert rep.all_match and rep.reciprocity_ok and rep.remark13_ok
    c1, c2 = rep.components
    assert c1.tau == 1 and not c1.beta_residue.trivial and not c1.alpha.trivial
    assert c2.tau == 2 and c2.beta_residue.trivial
    rep = verify_theorem(bundle("4", "t", F5))
    (c,) = rep.components
    assert c.matches and c.beta_residue.trivial and c.alpha.trivial
    assert not rep.hypothesis_notes


def test_theorem_with_quadratic_component():
    rep = verify_theorem(bundle("t+1", "t^2+1"))
    assert rep.all_match and len(rep.hypothesis_notes) == 2
    by_place = {str(c.place): c for c in rep.components}
    quad, lin = by_place["t^2+1"], by_place["t+1"]
    assert quad.place.residue_field.q == 9 and lin.role == A_VANISHING
    # residue side by the tame formula, cover side by enumerating squares of F_9
    place = quad.place
    tame = hilbert_symbol_tame(LocalElem.exact(place, P("t+1")), LocalElem.exact(place, P("t^2+1")))
    bar = place.to_canonical(place.reduce(P("t+1")))
    assert (tame.value == 1) == brute_square(bar) == quad.beta_residue.trivial
    assert lin.beta_residue.trivial == brute_square(F3(2)) == False  # noqa: E712
    assert quad.fiber.cover.startswith("s^2-")


def test_reciprocity_examples():
    b = bundle("2", "t")
    inf, t = place_make("inf", F3), place_make(P("t"), F3)
    for place in (inf, t):
        sym = hilbert_symbol_tame(LocalElem.exact(place, P("2")), LocalElem.exact(place, P("t")))
        assert sym.value == -1
    assert check_reciprocity(b)
    for text in ("t", "t^3+2", "2*t^5+t+1"):
        assert check_reciprocity(bundle("4", text, F5))


def test_reciprocity_random_with_common_factors():
    rng = random.Random(2)
    for _ in range(40):
        a = Poly(F5, [rng.randrange(5) for _ in range(4)] + [1])
        b = Poly(F5, [rng.randrange(5) for _ in range(5)] + [rng.randrange(1, 5)])
        assert check_reciprocity(ConicBundle.from_polys(a, b))


def test_tau_one_consistency():
    assert remark_13_check(bundle("2", "t"))
    assert remark_13_check(bundle("4", "t", F5))
    rep = verify_theorem(bundle("2", "t"))
    assert remark_13_check(rep)


def test_all_small_bundles_over_f3():
    polys = [Poly(F3, list(cs)) for n in range(1, 4) for cs in itertools.product(range(3), repeat=n) if cs[-1]]
    checked = 0
    for a, b in itertools.product(polys, repeat=2):
        try:
            rep = verify_theorem(ConicBundle.from_polys(a, b))
        except HypothesisViolation:
            continue
        assert rep.all_match and rep.reciprocity_ok and rep.remark13_ok
        for c in rep.components:
            if c.tau % 2 == 0:
                assert c.beta_residue.trivial
        checked += 1
    assert checked > 100


def test_from_form_matches_diagonal():
    form = TernaryForm.from_matrix([[1, 1, 0], [1, -1, 0], [0, 0, RatFunc(P("-t"))]], F3)
    b = ConicBundle.from_form(form)
    assert (b.a, b.b) == (P("2"), P("t"))
    assert [c.matches for c in verify_theorem(b).components] == [True]
