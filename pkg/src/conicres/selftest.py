"""Seeded property suites with greedy counterexample shrinking.

Every property draws raw inputs (nested lists of encoded field elements and
small integers) from a generator seeded by ``f"{seed}:{name}:{p}:{d}"``, so a
property's trials do not depend on which other properties ran.  A failing raw
input is shrunk by dropping top-degree terms and decrementing coefficients
while it keeps failing.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

from .bundles import ConicBundle, check_hypotheses, check_reciprocity, verify_theorem
from .cocycles import (QuadExtElem, cocycle_check, galois_sigma, norm, norm_obstruction, norm_valuation_parity,
                       standard_cocycle, strip_squares)
from .conics import (TernaryForm, conjugate, degenerate_fiber, diagonalize,
                     residual_vanishes)
from .errors import DegenerateForm, DoubleLine, HypothesisViolation
from .fields import FqElem, FqField, canonical_nonsquare, fq_make, is_prime
from .local import LocalElem, hensel_is_square, hensel_sqrt, square_class
from .places import Place, place_make
from .poly import Poly, RatFunc, format_poly, is_irreducible, poly_gcd
from .symbols import gysin_residue, hilbert_symbol_conic, hilbert_symbol_tame, main_lemma_check

SUITES = ("symbols", "lemma", "cocycles", "bundles")
SHRINK_STEPS = 400


class Discard(Exception):
    """Raised when a (shrunk) input no longer meets a property's precondition."""


@dataclass
class Context:
    field: FqField
    precision: int = 24
    memo: dict = field(default_factory=dict, repr=False, compare=False)

    @cached_property
    def place_t(self) -> Place:
        return place_make(Poly.t(self.field), self.field)

    @cached_property
    def places(self) -> list[Place]:
        """t, t+1, infinity and the first monic irreducible quadratic."""
        F = self.field
        quad = next(f for f in (Poly(F, [c0, c1, 1]) for c1 in range(F.q) for c0 in range(1, F.q))
                    if is_irreducible(f))
        return [self.place_t, place_make(Poly(F, [1, 1]), F), place_make("inf", F), place_make(quad, F)]

    def poly(self, cs) -> Poly:
        return Poly(self.field, [c % self.field.q for c in cs])


@dataclass
class Property:
    name: str
    suite: str
    gen: Callable | None
    check: Callable
    show: Callable | None = None
    exhaustive: bool = False
    scale: int = 1


@dataclass
class PropertyResult:
    name: str
    suite: str
    trials: int
    passed: int
    failed: int
    discarded: int
    counterexample: str | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def to_json(self) -> dict:
        return {"name": self.name, "suite": self.suite, "trials": self.trials, "passed": self.passed,
                "failed": self.failed, "discarded": self.discarded,
                "counterexample": self.counterexample, "error": self.error}


# -- raw input generation ------------------------------------------------------

def _coeffs(rng, q, maxdeg):
    n = rng.randint(0, maxdeg)
    return [rng.randrange(q) for _ in range(n)] + [rng.randrange(1, q)]


def _spec(rng, ctx, maxdeg=3, erange=3):
    q = ctx.field.q
    return [_coeffs(rng, q, maxdeg), _coeffs(rng, q, maxdeg), rng.randint(-erange, erange)]


def _elem(ctx, place, spec) -> LocalElem:
    # generators and checks rebuild the same elements; keep the last few
    key = (place.sort_key(), repr(spec))
    hit = ctx.memo.get(key)
    if hit is None:
        hit = ctx.memo[key] = _build_elem(ctx, place, spec)
        if len(ctx.memo) > 64:
            del ctx.memo[next(iter(ctx.memo))]
    return hit


def _build_elem(ctx, place, spec) -> LocalElem:
    num, den, e = ctx.poly(spec[0]), ctx.poly(spec[1]), spec[2]
    if num.is_zero() or den.is_zero():
        raise Discard
    u = place.uniformizer
    if e > 0:
        num, den = num * u.num**e, den * u.den**e
    elif e < 0:
        num, den = num * u.den**-e, den * u.num**-e
    return LocalElem.exact(place, RatFunc(num, den))


def _unit_spec(rng, ctx, place):
    q = ctx.field.q
    while True:
        num = _coeffs(rng, q, 3)
        if place.is_infinity:
            den = [rng.randrange(q) for _ in range(len(num) - 1)] + [rng.randrange(1, q)]
            return [num, den, 0]
        den = _coeffs(rng, q, 3)
        # cheap sufficient test: pi divides neither side
        if place.reduce(ctx.poly(num)) and place.reduce(ctx.poly(den)):
            return [num, den, 0]


def _show_spec(ctx, spec):
    num, den = ctx.poly(spec[0]), ctx.poly(spec[1])
    out = f"({format_poly(num)})" if den.degree == 0 and den.c == (1,) else f"({format_poly(num)})/({format_poly(den)})"
    return out + (f"*pi^{spec[2]}" if spec[2] else "")


def _show_at(names):
    def show(ctx, raw):
        place = ctx.places[raw[0]] if names and names[0] == "@" else ctx.place_t
        specs = raw[1:] if names and names[0] == "@" else raw
        labels = names[1:] if names and names[0] == "@" else names
        parts = [f"{n}={_show_spec(ctx, s)}" for n, s in zip(labels, specs)]
        return f"at {place}: " + ", ".join(parts)
    return show


def _gen_mix(k, unit_first=False):
    def gen(rng, ctx):
        i = rng.randrange(len(ctx.places))
        place = ctx.places[i]
        specs = [_unit_spec(rng, ctx, place) if (unit_first and j == 0) else _spec(rng, ctx) for j in range(k)]
        return [i] + specs
    return gen


def _gen_t(k, unit_first=False):
    def gen(rng, ctx):
        return [_unit_spec(rng, ctx, ctx.place_t) if (unit_first and j == 0) else _spec(rng, ctx)
                for j in range(k)]
    return gen


def _unpack_mix(ctx, raw):
    place = ctx.places[raw[0] % len(ctx.places)]
    return place, [_elem(ctx, place, s) for s in raw[1:]]


# -- symbols suite -------------------------------------------------------------

def _small_fields(limit=121):
    out = []
    for p in range(3, limit + 1):
        if not is_prime(p):
            continue
        d = 1
        while p**d <= limit:
            out.append(fq_make(p, d))
            d += 1
    return out


def _check_square_tables(ctx, raw):
    for F in _small_fields():
        squares = {F.mul(x, x) for x in range(1, F.q)}
        nonsq = None
        for n in F.lex_order():
            if not n:
                continue
            x = FqElem(F, n)
            if x.is_square() != (n in squares):
                return False
            if n in squares and x.sqrt() * x.sqrt() != x:
                return False
            if n not in squares and nonsq is None:
                nonsq = n
        if canonical_nonsquare(F).n != nonsq:
            return False
    return True


def _brute_symbol_mod_t2(F: FqField, a: tuple, b: tuple) -> int:
    """+1 iff x^2 - a y^2 - b z^2 = 0 has a primitive solution in (F[t]/t^2)^3.

    a, b are (c0, c1) truncated coefficient pairs of elements of valuation 0 or 1.
    """
    p = F.p
    elems = [(x0, x1) for x0 in range(p) for x1 in range(p)]

    def mul(u, v):
        return ((u[0] * v[0]) % p, (u[0] * v[1] + u[1] * v[0]) % p)

    sq = {u: mul(u, u) for u in elems}
    asq = {u: mul(a, sq[u]) for u in elems}
    bsq = {u: mul(b, sq[u]) for u in elems}
    for x in elems:
        for y in elems:
            for z in elems:
                if not (x[0] or y[0] or z[0]):
                    continue
                s0 = (sq[x][0] - asq[y][0] - bsq[z][0]) % p
                s1 = (sq[x][1] - asq[y][1] - bsq[z][1]) % p
                if not s0 and not s1:
                    return 1
    return -1


def _check_square_class_pairs(ctx, raw):
    for p in (3, 5):
        F = fq_make(p)
        place = place_make(Poly.t(F), F)
        u0 = canonical_nonsquare(F).n
        reps = [(1, 0), (u0, 0), (0, 1), (0, u0)]
        for ra, rb in itertools.product(reps, repeat=2):
            a = LocalElem.exact(place, Poly(F, list(ra)))
            b = LocalElem.exact(place, Poly(F, list(rb)))
            tame = hilbert_symbol_tame(a, b).value
            conic = hilbert_symbol_conic(a, b)[0].value
            brute = _brute_symbol_mod_t2(F, ra, rb)
            if not tame == conic == brute:
                return False
    return True


def _check_fibers(ctx, raw):
    for F in _small_fields():
        squares = {F.mul(x, x) for x in range(1, F.q)}
        for n in range(1, F.q):
            fib = degenerate_fiber(FqElem(F, n))
            if fib.split != (n in squares) or fib.split != square_class(FqElem(F, n)).trivial:
                return False
            if fib.split and fib.slopes[0] * fib.slopes[0] != FqElem(F, n):
                return False
        try:
            degenerate_fiber(F.zero)
            return False
        except DoubleLine:
            pass
    return True


def _check_oracles(ctx, raw):
    a, b = (_elem(ctx, ctx.place_t, s) for s in raw)
    tame = hilbert_symbol_tame(a, b)
    conic, point = hilbert_symbol_conic(a, b, ctx.precision)
    if point is not None and not residual_vanishes(a, b, point.coords):
        return False
    return tame == conic


def _check_bilinear(ctx, raw):
    _, (a, b1, b2) = _unpack_mix(ctx, raw)
    return hilbert_symbol_tame(a, b1 * b2) == hilbert_symbol_tame(a, b1) * hilbert_symbol_tame(a, b2)


def _check_symmetry(ctx, raw):
    _, (a, b) = _unpack_mix(ctx, raw)
    return hilbert_symbol_tame(a, b) == hilbert_symbol_tame(b, a)


def _check_steinberg(ctx, raw):
    place, (a,) = _unpack_mix(ctx, raw)
    one = LocalElem.exact(place, 1)
    b = one - a
    if a == one or b.is_zero():
        raise Discard
    return hilbert_symbol_tame(a, b).trivial and residual_vanishes(a, b, (one, one, one))


def _check_square_invariance(ctx, raw):
    _, (a, b, s) = _unpack_mix(ctx, raw)
    r = gysin_residue(a, b).value
    return gysin_residue(a * s * s, b).value == r == gysin_residue(a, b * s * s).value


def _gen_units(rng, ctx):
    i = rng.randrange(len(ctx.places))
    place = ctx.places[i]
    return [i, _unit_spec(rng, ctx, place), _unit_spec(rng, ctx, place)]


def _check_unramified(ctx, raw):
    _, (u, v) = _unpack_mix(ctx, raw)
    if u.nu() or v.nu():
        raise Discard
    return gysin_residue(u, v).trivial


def _check_symbol_residue(ctx, raw):
    _, (a, b) = _unpack_mix(ctx, raw)
    return hilbert_symbol_tame(a, b).trivial == gysin_residue(a, b).trivial


def _check_valuation(ctx, raw):
    _, (x, y) = _unpack_mix(ctx, raw)
    xy = x * y
    return xy.nu() == x.nu() + y.nu() and xy.unit_residue() == x.unit_residue() * y.unit_residue()


def _check_hensel_squares(ctx, raw):
    place, (x,) = _unpack_mix(ctx, raw)
    u0 = LocalElem.exact(place, RatFunc(place.lift(canonical_nonsquare(place.residue_field))))
    return hensel_is_square(x * x) and not hensel_is_square(u0 * x * x)


def _check_four_classes(ctx, raw):
    place, (x,) = _unpack_mix(ctx, raw)
    cls = square_class(x)
    reps = []
    for unit_square in (True, False):
        for odd in (False, True):
            rep = type(cls)("local", place.residue_field, unit_square, odd, place).representative
            reps.append((unit_square, odd, hensel_is_square(x / rep)))
    hits = [(u, o) for u, o, h in reps if h]
    return hits == [(cls.unit_square, cls.odd)]


def _check_expand(ctx, raw):
    _, (x, y) = _unpack_mix(ctx, raw)
    n = ctx.precision
    return (x * y).expand(n) == x.expand(n) * y.expand(n)


def _check_hensel_sqrt(ctx, raw):
    _, (x,) = _unpack_mix(ctx, raw)
    n = ctx.precision
    x2 = x * x
    y = hensel_sqrt(x2, n)
    root = y.unit_residue()
    return (y * y) == x2.expand(n) and root == (x2.unit_residue()).sqrt()


# -- lemma suite ---------------------------------------------------------------

def _check_main_lemma_t(ctx, raw):
    a, b = (_elem(ctx, ctx.place_t, s) for s in raw)
    if a.nu():
        raise Discard
    return main_lemma_check(a, b).equal


def _check_main_lemma_mix(ctx, raw):
    _, (a, b) = _unpack_mix(ctx, raw)
    if a.nu():
        raise Discard
    return main_lemma_check(a, b).equal


# -- cocycles suite ------------------------------------------------------------

def _gen_ext(k):
    def gen(rng, ctx):
        i = rng.randrange(len(ctx.places))
        place = ctx.places[i]
        while True:
            a = _unit_spec(rng, ctx, place)
            if not hensel_is_square(_elem(ctx, place, a)):
                break
        return [i, a] + [[_spec(rng, ctx), _spec(rng, ctx)] for _ in range(k)]
    return gen


def _unpack_ext(ctx, raw):
    place = ctx.places[raw[0] % len(ctx.places)]
    a = _elem(ctx, place, raw[1])
    if a.nu() or hensel_is_square(a):
        raise Discard
    elems = [QuadExtElem(a, _elem(ctx, place, u), _elem(ctx, place, v), check=False) for u, v in raw[2:]]
    return place, a, elems


def _check_sigma(ctx, raw):
    _, _, (x, y) = _unpack_ext(ctx, raw)
    s = galois_sigma
    return s(x + y) == s(x) + s(y) and s(x * y) == s(x) * s(y)


def _check_norm(ctx, raw):
    _, _, (x, y) = _unpack_ext(ctx, raw)
    nx, ny = norm(x), norm(y)
    return norm(x * y) == nx * ny and nx.nu() % 2 == 0 and ny.nu() % 2 == 0


def _check_norm_even(ctx, raw):
    _, _, (c,) = _unpack_ext(ctx, raw)
    return norm_valuation_parity(c) == 0


def _gen_ext_b(rng, ctx):
    raw = _gen_ext(0)(rng, ctx)
    return raw + [_spec(rng, ctx)]


def _check_cocycle(ctx, raw):
    place = ctx.places[raw[0] % len(ctx.places)]
    a, b = _elem(ctx, place, raw[1]), _elem(ctx, place, raw[2])
    if a.nu() or hensel_is_square(a):
        raise Discard
    h = standard_cocycle(a, b)
    chk = cocycle_check(h)
    if not (chk.is_cocycle and chk.scalar == b):
        return False
    obs = norm_obstruction(LocalElem.exact(place, 1), chk.scalar)
    return obs.cohomologous_possible == (b.nu() % 2 == 0)


def _check_obstruction(ctx, raw):
    place = ctx.places[raw[0] % len(ctx.places)]
    a, b = _elem(ctx, place, raw[1]), _elem(ctx, place, raw[2])
    if a.nu() or hensel_is_square(a):
        raise Discard
    obs = norm_obstruction(LocalElem.exact(place, 1), strip_squares(b))
    return (hilbert_symbol_tame(a, b).value == -1) == (not obs.cohomologous_possible)


def _gen_obstruction_t(rng, ctx):
    while True:
        a = _unit_spec(rng, ctx, ctx.place_t)
        if not hensel_is_square(_elem(ctx, ctx.place_t, a)):
            return [0, a, _spec(rng, ctx)]


# -- bundles suite -------------------------------------------------------------

def _random_irreducible_coeffs(rng, q, deg, F):
    while True:
        cs = [rng.randrange(q) for _ in range(deg)]
        if is_irreducible(Poly(F, cs + [1])):
            return cs


def _gen_bundle(rng, ctx):
    F = ctx.field
    q = F.q
    pieces, total = [], 0
    target = rng.randint(1, 8)
    while total < target:
        deg = rng.randint(1, min(4, 8 - total))
        exp = rng.randint(1, max(1, min(3, (8 - total) // deg)))
        pieces.append([_random_irreducible_coeffs(rng, q, deg, F), exp])
        total += deg * exp
    b_unit = rng.randrange(1, q)
    while True:
        a = _coeffs(rng, q, 4)
        _, b = _bundle_polys(ctx, [a, b_unit, pieces])
        if poly_gcd(ctx.poly(a), b).degree == 0:
            return [a, b_unit, pieces]


def _bundle_polys(ctx, raw):
    a_cs, b_unit, pieces = raw
    b = ctx.poly([b_unit])
    for cs, e in pieces:
        b = b * ctx.poly(list(cs) + [1]) ** e
    a = ctx.poly(a_cs)
    if a.is_zero() or b.is_zero():
        raise Discard
    return a, b


def _bundle(ctx, raw) -> ConicBundle:
    a, b = _bundle_polys(ctx, raw)
    try:
        check_hypotheses(a, b)
    except HypothesisViolation:
        raise Discard
    return ConicBundle(ctx.field, a, b)


def _show_bundle(ctx, raw):
    try:
        a, b = _bundle_polys(ctx, raw)
    except Discard:
        return json.dumps(raw)
    return f"a={format_poly(a)}, b={format_poly(b)}"


def _check_theorem(ctx, raw):
    return verify_theorem(_bundle(ctx, raw), reciprocity=False).all_match


def _check_even_tau(ctx, raw):
    rep = verify_theorem(_bundle(ctx, raw), reciprocity=False)
    return all(c.beta_residue.trivial for c in rep.components if c.tau % 2 == 0)


def _check_tau_one(ctx, raw):
    return verify_theorem(_bundle(ctx, raw), reciprocity=False).remark13_ok


def _gen_pair6(rng, ctx):
    return [_coeffs(rng, ctx.field.q, 6), _coeffs(rng, ctx.field.q, 6)]


def _show_pair(ctx, raw):
    return f"a={format_poly(ctx.poly(raw[0]))}, b={format_poly(ctx.poly(raw[1]))}"


def _check_reciprocity(ctx, raw):
    a, b = ctx.poly(raw[0]), ctx.poly(raw[1])
    if a.is_zero() or b.is_zero():
        raise Discard
    return check_reciprocity(ConicBundle(ctx.field, a, b))


def _gen_scaling(rng, ctx):
    return _gen_bundle(rng, ctx) + [_coeffs(rng, ctx.field.q, 2)]


def _check_scaling(ctx, raw):
    bundle = _bundle(ctx, raw[:3])
    s = ctx.poly(raw[3])
    if s.is_zero() or poly_gcd(s, bundle.a).degree > 0:
        raise Discard
    scaled = ConicBundle(ctx.field, bundle.a, bundle.b * s * s)
    r1 = verify_theorem(bundle, reciprocity=False)
    r2 = verify_theorem(scaled, reciprocity=False)
    if not (r1.all_match and r2.all_match):
        return False
    old = {c.place: c for c in r1.components}
    for c in r2.components:
        prev = old.get(c.place)
        divides = s.degree > 0 and (s % c.place.pi).is_zero()
        if divides:
            if (c.tau - (prev.tau if prev else 0)) % 2:
                return False
        elif prev is None or (prev.tau, prev.alpha, prev.beta_residue.value) != (c.tau, c.alpha, c.beta_residue.value):
            return False
    return True


def _gen_gram(rng, ctx):
    q = ctx.field.q
    return [[_coeffs(rng, q, 3) if rng.random() < 0.8 else [0] for _ in range(6)]]


def _gram(ctx, raw):
    e = [ctx.poly(cs) for cs in raw[0]]
    rows = [[e[0], e[1], e[2]], [e[1], e[3], e[4]], [e[2], e[4], e[5]]]
    return TernaryForm.from_matrix(rows, ctx.field)


def _check_roundtrip(ctx, raw):
    form = _gram(ctx, raw)
    try:
        dg = diagonalize(form)
    except DegenerateForm:
        raise Discard
    D = conjugate(form.gram, dg.basis)
    zero = RatFunc.coerce(0, ctx.field)
    want = [[dg.scale, zero, zero], [zero, -(dg.scale * dg.a), zero], [zero, zero, -(dg.scale * dg.b)]]
    return all(D[i][j] == want[i][j] for i in range(3) for j in range(3))


def _check_diag_independence(ctx, raw):
    form = _gram(ctx, raw)
    try:
        d1, d2 = diagonalize(form, (0, 1, 2)), diagonalize(form, (2, 0, 1))
    except DegenerateForm:
        raise Discard
    F = ctx.field
    rng = random.Random(json.dumps(raw))
    places = [place_make("inf", F)]
    while len(places) < 5:
        f = Poly(F, [rng.randrange(F.q) for _ in range(rng.randint(1, 2))] + [1])
        if is_irreducible(f):
            places.append(place_make(f, F))
    for place in places:
        s1 = hilbert_symbol_tame(LocalElem.exact(place, d1.a), LocalElem.exact(place, d1.b))
        s2 = hilbert_symbol_tame(LocalElem.exact(place, d2.a), LocalElem.exact(place, d2.b))
        if s1 != s2:
            return False
    b1, b2 = ConicBundle.from_form(form, (0, 1, 2)), ConicBundle.from_form(form, (2, 0, 1))
    for bundle in (b1, b2):
        try:
            if not verify_theorem(bundle, reciprocity=False).all_match:
                return False
        except HypothesisViolation:
            pass
    return True


# -- registry ------------------------------------------------------------------

PROPERTIES: list[Property] = [
    Property("square-tables", "symbols", None, _check_square_tables, exhaustive=True),
    Property("square-class-pairs", "symbols", None, _check_square_class_pairs, exhaustive=True),
    Property("degenerate-fibers", "symbols", None, _check_fibers, exhaustive=True),
    Property("oracle-agreement", "symbols", _gen_t(2), _check_oracles, _show_at(["a", "b"])),
    Property("bilinearity", "symbols", _gen_mix(3), _check_bilinear, _show_at(["@", "a", "b1", "b2"])),
    Property("symmetry", "symbols", _gen_mix(2), _check_symmetry, _show_at(["@", "a", "b"])),
    Property("steinberg", "symbols", _gen_mix(1), _check_steinberg, _show_at(["@", "a"])),
    Property("square-invariance", "symbols", _gen_mix(3), _check_square_invariance, _show_at(["@", "a", "b", "s"])),
    Property("unramified-vanishing", "symbols", _gen_units, _check_unramified, _show_at(["@", "u", "v"])),
    Property("symbol-vs-residue", "symbols", _gen_mix(2), _check_symbol_residue, _show_at(["@", "a", "b"])),
    Property("valuation-multiplicative", "symbols", _gen_mix(2), _check_valuation, _show_at(["@", "x", "y"])),
    Property("hensel-squares", "symbols", _gen_mix(1), _check_hensel_squares, _show_at(["@", "x"])),
    Property("four-square-classes", "symbols", _gen_mix(1), _check_four_classes, _show_at(["@", "x"])),
    Property("expand-consistency", "symbols", _gen_mix(2), _check_expand, _show_at(["@", "x", "y"])),
    Property("hensel-sqrt", "symbols", _gen_mix(1), _check_hensel_sqrt, _show_at(["@", "x"])),
    Property("main-lemma", "lemma", _gen_t(2, unit_first=True), _check_main_lemma_t, _show_at(["a", "b"])),
    Property("main-lemma-places", "lemma", _gen_mix(2, unit_first=True), _check_main_lemma_mix,
             _show_at(["@", "a", "b"])),
    Property("sigma-automorphism", "cocycles", _gen_ext(2), _check_sigma),
    Property("norm-parity", "cocycles", _gen_ext(2), _check_norm),
    Property("norm-even", "cocycles", _gen_ext(1), _check_norm_even),
    Property("cocycle-scalar", "cocycles", _gen_ext_b, _check_cocycle, _show_at(["@", "a", "b"])),
    Property("obstruction-consistency", "cocycles", _gen_ext_b, _check_obstruction, _show_at(["@", "a", "b"])),
    Property("obstruction-consistency-t", "cocycles", _gen_obstruction_t, _check_obstruction,
             _show_at(["@", "a", "b"])),
    Property("theorem", "bundles", _gen_bundle, _check_theorem, _show_bundle),
    Property("even-tau-trivial", "bundles", _gen_bundle, _check_even_tau, _show_bundle),
    Property("tau-one-cover", "bundles", _gen_bundle, _check_tau_one, _show_bundle),
    Property("reciprocity", "bundles", _gen_pair6, _check_reciprocity, _show_pair),
    Property("scaling-invariance", "bundles", _gen_scaling, _check_scaling,
             lambda ctx, raw: _show_bundle(ctx, raw[:3]) + f", s={format_poly(ctx.poly(raw[3]))}"),
    Property("diagonalization-roundtrip", "bundles", _gen_gram, _check_roundtrip, scale=10),
    Property("diagonalization-independence", "bundles", _gen_gram, _check_diag_independence, scale=10),
]


def properties(suite: str = "all") -> list[Property]:
    if suite == "all":
        return list(PROPERTIES)
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
    return [prop for prop in PROPERTIES if prop.suite == suite]


def get_property(name: str) -> Property:
    for prop in PROPERTIES:
        if prop.name == name:
            return prop
    raise KeyError(name)


# -- running and shrinking -----------------------------------------------------

def _outcome(prop, ctx, raw):
    """True / False / None (discarded), plus an error message for exceptions."""
    try:
        return bool(prop.check(ctx, raw)), None
    except Discard:
        return None, None
    except Exception as exc:  # a raised error on a valid input is a failure
        return False, f"{type(exc).__name__}: {exc}"


def _candidates(raw):
    """One-step simplifications: drop a term (top first), decrement a coefficient, shrink an integer."""
    if isinstance(raw, int):
        if raw > 0:
            yield raw - 1
        elif raw < 0:
            yield raw + 1
        return
    if raw and all(isinstance(x, int) for x in raw):
        for i in range(len(raw) - 1, -1, -1) if len(raw) > 1 else ():
            yield raw[:i] + raw[i + 1:]
        for i, x in enumerate(raw):
            if x > 0:
                yield raw[:i] + [x - 1] + raw[i + 1:]
        return
    if raw and all(isinstance(x, list) for x in raw) and len(raw) > 1:
        yield raw[:-1]
    for i, x in enumerate(raw):
        for y in _candidates(x):
            yield raw[:i] + [y] + raw[i + 1:]


def shrink(prop: Property, ctx: Context, raw):
    steps = 0
    improved = True
    while improved and steps < SHRINK_STEPS:
        improved = False
        for cand in _candidates(raw):
            steps += 1
            ok, _ = _outcome(prop, ctx, cand)
            if ok is False:
                raw = cand
                improved = True
                break
            if steps >= SHRINK_STEPS:
                break
    return raw


def _show(prop, ctx, raw):
    if prop.show is None:
        return json.dumps(raw)
    try:
        return prop.show(ctx, raw)
    except Exception:
        return json.dumps(raw)


def run_property(prop: Property, ctx: Context, trials: int, seed: int) -> PropertyResult:
    F = ctx.field
    if prop.exhaustive:
        ok, err = _outcome(prop, ctx, None)
        return PropertyResult(prop.name, prop.suite, 1, int(bool(ok)), int(not ok), 0,
                              None if ok else "exhaustive check", err)
    n = max(1, trials // prop.scale)
    rng = random.Random(f"{seed}:{prop.name}:{F.p}:{F.d}")
    passed = failed = discarded = 0
    example = error = None
    for _ in range(n):
        raw = prop.gen(rng, ctx)
        ok, err = _outcome(prop, ctx, raw)
        if ok is None:
            discarded += 1
        elif ok:
            passed += 1
        else:
            failed += 1
            if example is None:
                small = shrink(prop, ctx, raw)
                example = _show(prop, ctx, small)
                error = _outcome(prop, ctx, small)[1] or err
    return PropertyResult(prop.name, prop.suite, n, passed, failed, discarded, example, error)


@dataclass
class Summary:
    suite: str
    p: int
    d: int
    seed: int
    trials: int
    precision: int
    results: list[PropertyResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_json(self) -> dict:
        return {"suite": self.suite, "p": self.p, "d": self.d, "seed": self.seed, "trials": self.trials,
                "precision": self.precision, "all_passed": self.ok,
                "properties": [r.to_json() for r in self.results]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def run_suite(suite: str, p: int, d: int = 1, *, trials: int = 100, seed: int = 0,
              precision: int = 24, only=None) -> Summary:
    ctx = Context(fq_make(p, d), precision)
    summary = Summary(suite, p, d, seed, trials, precision)
    for prop in properties(suite):
        if only is not None and prop.name not in only:
            continue
        summary.results.append(run_property(prop, ctx, trials, seed))
    return summary
