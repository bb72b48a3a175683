"""Diagonal conic bundles x^2 - a(t) y^2 - b(t) z^2 over the affine line.

Each irreducible factor of a*b is a component of the discriminant.  For every
component the residue of the symbol (a, b) is compared with tau * alpha, where
alpha is the class of the double cover parametrizing the two lines of the
degenerate fiber.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .conics import LinePair, TernaryForm, degenerate_fiber
from .errors import HypothesisViolation, ZeroInput
from .fields import FqField
from .local import LocalElem, SquareClass
from .places import Place, place_make
from .poly import Poly, RatFunc, is_irreducible, poly_factor, poly_gcd
from .symbols import ResidueClass, gysin_residue, hilbert_symbol_tame

B_VANISHING = "b-vanishing"
A_VANISHING = "a-vanishing"

SWAP_NOTE = ("a-vanishing components are treated by the symmetry (a, b) = (b, a): "
             "b is a unit there and the roles of a and b are exchanged")
TAU_NOTE = "tau on an a-vanishing component is the multiplicity of a (extrapolated through the swap)"


def _poly_from_rat(r: RatFunc) -> Poly:
    # num/den and num*den differ by the square den^2
    return r.num * r.den


@dataclass(frozen=True)
class ConicBundle:
    field: FqField
    a: Poly
    b: Poly
    form: TernaryForm | None = None

    @classmethod
    def from_polys(cls, a: Poly, b: Poly) -> "ConicBundle":
        if a.is_zero() or b.is_zero():
            raise ZeroInput("a and b must be nonzero")
        return cls(a.field, a, b)

    @classmethod
    def from_form(cls, form: TernaryForm, order=(0, 1, 2)) -> "ConicBundle":
        """Diagonalize, then clear denominators by square factors."""
        from .conics import diagonalize

        dg = diagonalize(form, order)
        return cls(form.field, _poly_from_rat(dg.a), _poly_from_rat(dg.b), form)

    @property
    def normalized(self) -> tuple[Poly, Poly]:
        return self.a, self.b


@dataclass(frozen=True)
class Component:
    place: Place
    role: str
    tau: int


def check_hypotheses(a: Poly, b: Poly) -> list[Component]:
    """Components of the discriminant, sorted by place; a common factor of a and b is rejected."""
    if a.is_zero() or b.is_zero():
        raise ZeroInput("a and b must be nonzero")
    g = poly_gcd(a, b)
    if g.degree > 0:
        factor = min((f for f, _ in poly_factor(g).factors), key=lambda f: f.sort_key())
        raise HypothesisViolation(
            f"a and b share the factor {factor}: the fiber there is a double line or worse", factor)
    comps = []
    for poly, role in ((b, B_VANISHING), (a, A_VANISHING)):
        if poly.degree <= 0:
            continue
        for f, m in poly_factor(poly).factors:
            comps.append(Component(place_make(f, a.field), role, m))
    comps.sort(key=lambda c: c.place.sort_key())
    return comps


def _other(a: Poly, b: Poly, role: str) -> Poly:
    return a if role == B_VANISHING else b


def component_alpha(place: Place, a: Poly, b: Poly, role: str) -> SquareClass:
    """Class of the cover of the component: chi of the residue of the non-vanishing coefficient."""
    unit = place.reduce(_other(a, b, role))
    if not unit:
        raise HypothesisViolation(f"both a and b vanish at {place}", place.pi)
    return SquareClass("residue", place.residue_field, place.model.is_square_raw(unit))


@dataclass
class ComponentVerdict:
    place: Place
    tau: int
    role: str
    alpha: SquareClass
    beta_residue: ResidueClass
    expected: SquareClass
    matches: bool
    a: Poly = dc_field(repr=False)
    b: Poly = dc_field(repr=False)

    @cached_property
    def fiber(self) -> LinePair:
        """The degenerate fiber as a line pair over the canonical residue field."""
        unit = self.place.reduce(_other(self.a, self.b, self.role))
        return degenerate_fiber(self.place.to_canonical(unit))


@dataclass
class ResidueReport:
    bundle: ConicBundle
    components: list[ComponentVerdict]
    hypothesis_notes: list[str]
    reciprocity_ok: bool
    remark13_ok: bool

    @property
    def all_match(self) -> bool:
        return all(c.matches for c in self.components)


def _verdict(bundle: ConicBundle, comp: Component) -> ComponentVerdict:
    place = comp.place
    a_loc = LocalElem.exact(place, bundle.a)
    b_loc = LocalElem.exact(place, bundle.b)
    beta = gysin_residue(a_loc, b_loc)
    alpha = component_alpha(place, bundle.a, bundle.b, comp.role)
    expected = alpha ** comp.tau
    return ComponentVerdict(place, comp.tau, comp.role, alpha, beta, expected,
                            beta.value.unit_square == expected.unit_square, bundle.a, bundle.b)


def verify_theorem(bundle: ConicBundle, *, reciprocity: bool = True) -> ResidueReport:
    comps = check_hypotheses(bundle.a, bundle.b)
    verdicts = [_verdict(bundle, c) for c in comps]
    notes = []
    if any(c.role == A_VANISHING for c in comps):
        notes += [SWAP_NOTE, TAU_NOTE]
    rec = check_reciprocity(bundle) if reciprocity else True
    return ResidueReport(bundle, verdicts, notes, rec, _tau_one_consistent(verdicts))


def _random_monic_irreducible(F: FqField, deg: int, rng: random.Random) -> Poly:
    while True:
        f = Poly(F, [rng.randrange(F.q) for _ in range(deg)] + [1])
        if is_irreducible(f):
            return f


def check_reciprocity(bundle: ConicBundle, rng: random.Random | None = None) -> bool:
    """Product over all places of the tame symbol of (a, b) is +1.

    Not part of the theorem being checked: a classical global consistency oracle.
    Three random places away from a*b are also required to give +1.
    """
    a, b = bundle.a, bundle.b
    F = bundle.field
    if rng is None:
        rng = random.Random(f"reciprocity:{F.p}:{F.modulus}:{a.c}:{b.c}")
    places = {c.place for c in _support(a * b)}
    places.add(place_make("inf", F))
    total = 1
    for place in sorted(places, key=Place.sort_key):
        total *= hilbert_symbol_tame(LocalElem.exact(place, a), LocalElem.exact(place, b)).value
    ab = a * b
    extra = 0
    while extra < 3:
        f = _random_monic_irreducible(F, rng.randint(1, 3), rng)
        if (ab % f).is_zero():
            continue
        extra += 1
        place = place_make(f, F)
        if hilbert_symbol_tame(LocalElem.exact(place, a), LocalElem.exact(place, b)).value != 1:
            return False
    return total == 1


def _support(f: Poly) -> list[Component]:
    if f.degree <= 0:
        return []
    return [Component(place_make(g, f.field), "", m) for g, m in poly_factor(f).factors]


def _tau_one_consistent(verdicts) -> bool:
    return all(not v.beta_residue.trivial or v.alpha.trivial for v in verdicts if v.tau == 1)


def remark_13_check(bundle: ConicBundle | ResidueReport) -> bool:
    """On tau = 1 components a trivial residue forces a trivial cover class."""
    if isinstance(bundle, ResidueReport):
        return _tau_one_consistent(bundle.components)
    return verify_theorem(bundle, reciprocity=False).remark13_ok
