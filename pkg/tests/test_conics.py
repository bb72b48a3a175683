import itertools

import pytest

from conicres.conics import (TernaryForm, conic_point_local, conic_point_residue, conjugate, degenerate_fiber,
                             diagonalize, residual_vanishes)
from conicres.errors import DegenerateForm, DoubleLine, ZeroElement
from conicres.fields import FqElem, fq_make
from conicres.local import LocalElem
from conicres.places import place_make
from conicres.poly import Poly, RatFunc, parse_poly
from conicres.symbols import hilbert_symbol_tame

F3, F5 = fq_make(3), fq_make(5)


def R(text, F=F3):
    return RatFunc(parse_poly(text, F))


def L(text, F=F3):
    return LocalElem.exact(place_make(Poly.t(F), F), parse_poly(text, F))


def check_diagonalization(form, dg):
    D = conjugate(form.gram, dg.basis)
    zero = RatFunc.coerce(0, form.field)
    want = [[dg.scale, zero, zero], [zero, -(dg.scale * dg.a), zero], [zero, zero, -(dg.scale * dg.b)]]
    assert [list(r) for r in D] == want


def test_diagonal_input():
    form = TernaryForm.diagonal(R("2"), R("t"), F3)
    dg = diagonalize(form)
    assert (dg.a, dg.b) == (R("2"), R("t"))
    one, zero = R("1"), R("0")
    assert dg.basis == ((one, zero, zero), (zero, one, zero), (zero, zero, one))


def test_completing_the_square():
    # (x + y)^2 - 2 y^2 - t z^2 = x^2 + 2xy - y^2 - t z^2
    form = TernaryForm.from_matrix([[1, 1, 0], [1, -1, 0], [0, 0, R("-t")]], F3)
    dg = diagonalize(form)
    assert (dg.a, dg.b) == (R("2"), R("t"))
    check_diagonalization(form, dg)


def test_pivoting_on_zero_corner():
    form = TernaryForm.from_matrix([[0, 1, 0], [1, 0, 0], [0, 0, R("t", F5)]], F5)
    dg = diagonalize(form)
    check_diagonalization(form, dg)
    form = TernaryForm.from_matrix([[0, 1, 0], [1, 0, 0], [0, 0, 0]], F5)
    with pytest.raises(DegenerateForm):
        diagonalize(form)


def test_residue_search_examples():
    assert conic_point_residue(F3(1), F3(1)).coords == (F3(1), F3(1), F3(0))
    assert conic_point_residue(F3(2), F3(1)).coords == (F3(0), F3(1), F3(1))
    x, y, z = conic_point_residue(F5(2), F5(2)).coords
    assert x * x - F5(2) * y * y - F5(2) * z * z == F5(0)


@pytest.mark.parametrize("p,d", [(3, 1), (5, 1), (7, 1), (3, 2)])
def test_residue_search_is_first_hit(p, d):
    F = fq_make(p, d)
    order = sorted(range(F.q), key=F.sort_key)
    for a, b in itertools.product(range(1, F.q), repeat=2):
        A, B = FqElem(F, a), FqElem(F, b)
        pt = conic_point_residue(A, B).coords
        x, y, z = pt
        assert x * x - A * y * y - B * z * z == F.zero
        # y = 1 chart, x outer and z inner in lex order: nothing earlier is a solution
        first = next((FqElem(F, xx), F.one, FqElem(F, zz)) for xx in order for zz in order
                     if FqElem(F, xx) ** 2 - A - B * FqElem(F, zz) ** 2 == F.zero)
        assert pt[0] == first[0] and pt[1] == first[1]


def test_local_point_examples():
    x, y, z = conic_point_local(L("4", F5), L("t", F5)).coords
    assert x.unit_coeffs[0] == F5(2) and not any(c.n for c in x.unit_coeffs[1:])
    assert y == L("1", F5) and z.is_zero()
    assert conic_point_local(L("2"), L("t")) is None
    a, b = L("2"), L("2")
    point = conic_point_local(a, b, 24)
    assert point.precision == 24 and residual_vanishes(a, b, point.coords)
    with pytest.raises(ZeroElement):
        conic_point_local(L("0"), L("1"))


def test_local_points_agree_with_tame_formula():
    for p in (3, 5, 7):
        F = fq_make(p)
        texts = ["1", "2", "t", "2*t", "t^2+1", "t^3", "3*t^2+t", "t+2", "2*t^5+t^2"]
        for sa, sb in itertools.product(texts, repeat=2):
            a, b = L(sa, F), L(sb, F)
            point = conic_point_local(a, b)
            assert (point is not None) == (hilbert_symbol_tame(a, b).value == 1)
            if point is not None:
                assert residual_vanishes(a, b, point.coords)
                assert min(c.nu() for c in point.coords if not c.is_zero()) == 0


def test_degenerate_fiber_examples():
    fib = degenerate_fiber(F5(4))
    assert fib.split and set(fib.slopes) == {F5(2), F5(3)}
    fib = degenerate_fiber(F3(2))
    assert not fib.split and fib.cover == "s^2-2"
    with pytest.raises(DoubleLine):
        degenerate_fiber(F3(0))
