import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conicres.errors import EvenCharacteristic, FieldMismatch, NotASquare, NotPrime, Reducible, ZeroInput
from conicres.fields import (FqElem, FqField, canonical_nonsquare, fq_arith, fq_is_square, fq_make, fq_sqrt,
                             irreducible_mod_p, quadratic_character)

SMALL = [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2), (11, 1), (11, 2), (13, 1)]


def brute_irreducible(cs, p):
    """Monic cs (low to high) has no monic factor of degree 1..deg/2 (trial division)."""
    n = len(cs) - 1
    for k in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            g = list(low) + [1]
            r = list(cs)
            for i in range(n, k - 1, -1):
                c = r[i]
                if c:
                    for j in range(k + 1):
                        r[i - k + j] = (r[i - k + j] - c * g[j]) % p
            if not any(r[:k]):
                return False
    return True


def test_prime_field_modulus():
    F = fq_make(3, 1)
    assert F.q == 3 and F.modulus == (0, 1)


def test_f9_modulus_is_lex_smallest_irreducible():
    F = fq_make(3, 2)
    assert F.modulus == (1, 0, 1)
    # oracle: first monic quadratic in lex order of (c0, c1) with nonzero c0 and no root
    for c0, c1 in itertools.product(range(3), repeat=2):
        if c0 and all((x * x + c1 * x + c0) % 3 for x in range(3)):
            assert (c0, c1, 1) == F.modulus
            break


@pytest.mark.parametrize("p,d", [(3, 3), (5, 2), (5, 3), (7, 2)])
def test_canonical_modulus_matches_brute_force(p, d):
    F = fq_make(p, d)
    for cs in itertools.product(range(p), repeat=d):
        if cs[0] and brute_irreducible(list(cs) + [1], p):
            assert F.modulus == tuple(cs) + (1,)
            return
    pytest.fail("no irreducible found")


def test_rabin_test_agrees_with_trial_division():
    for p in (3, 5):
        for d in (2, 3, 4):
            for cs in itertools.product(range(p), repeat=d):
                f = list(cs) + [1]
                assert irreducible_mod_p(f, p) == brute_irreducible(f, p), (p, f)


def test_rejects_even_and_composite():
    with pytest.raises(EvenCharacteristic):
        fq_make(2, 1)
    with pytest.raises(NotPrime):
        fq_make(9, 1)
    with pytest.raises(Reducible):
        FqField(3, (2, 0, 1))  # x^2 + 2 = (x+1)(x+2)


def test_arith_examples():
    F7, F5 = fq_make(7), fq_make(5)
    assert fq_arith(F7(3), F7(5), "mul") == F7(1)
    assert fq_arith(F5(1), F5(2), "div") == F5(3)
    assert F5(2) ** -1 == F5(3)
    F9 = fq_make(3, 2)
    x = F9.gen()
    assert x + x == F9((0, 2))
    assert x * x == F9(-1)  # modulus x^2 + 1


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        fq_make(3)(1) + fq_make(5)(1)


def test_square_examples():
    assert not fq_is_square(fq_make(3)(2))
    assert fq_is_square(fq_make(5)(4))
    assert fq_is_square(fq_make(7)(2))
    assert fq_sqrt(fq_make(7)(2)) == fq_make(7)(3)
    assert fq_sqrt(fq_make(5)(4)) == fq_make(5)(2)
    with pytest.raises(NotASquare):
        fq_sqrt(fq_make(3)(2))
    with pytest.raises(ZeroInput):
        fq_is_square(fq_make(3)(0))


@pytest.mark.parametrize("p,d", SMALL)
def test_squares_and_roots_by_enumeration(p, d):
    F = fq_make(p, d)
    squares = {}
    for n in range(1, F.q):
        y = FqElem(F, n)
        squares.setdefault((y * y).n, []).append(y)
    assert len(squares) == (F.q - 1) // 2
    for n in range(1, F.q):
        x = FqElem(F, n)
        assert x.is_square() == (n in squares)
        assert quadratic_character(x) == (1 if n in squares else -1)
        if n in squares:
            root = fq_sqrt(x)
            # canonical root: lexicographically smaller coefficient tuple of the two roots
            assert root == min(squares[n], key=lambda r: r.coeffs)
    u0 = canonical_nonsquare(F)
    first = min((FqElem(F, n) for n in range(1, F.q) if n not in squares), key=lambda r: r.coeffs)
    assert u0 == first


def test_tables_and_digit_arithmetic_agree():
    with_tables = FqField(3, (1, 2, 0, 1), tables=True)
    digits = FqField(3, (1, 2, 0, 1), tables=False)
    for x in range(27):
        for y in range(27):
            assert with_tables.mul(x, y) == digits.mul(x, y)
            assert with_tables.add(x, y) == digits.add(x, y)
        if x:
            assert with_tables.inv(x) == digits.inv(x)
            assert with_tables.is_square_raw(x) == digits.is_square_raw(x)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_field_axioms(pd, data):
    F = fq_make(*pd)
    el = st.integers(0, F.q - 1).map(lambda n: FqElem(F, n))
    x, y, z = data.draw(el), data.draw(el), data.draw(el)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == F.zero
    if x:
        assert x * x.inverse() == F.one
        assert x ** (F.q - 1) == F.one
