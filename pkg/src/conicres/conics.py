"""Ternary quadratic forms, conic points, and degenerate fibers.

The local point search here is the engine of the search-based Hilbert symbol:
it decides solvability of x^2 - a y^2 - b z^2 = 0 over the completion by a
residue-level case analysis followed by Hensel lifting, without ever using the
tame symbol formula.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateForm, DoubleLine, PrecisionExhausted, SearchSpaceTooLarge, ZeroElement
from .fields import FqElem, FqField
from .local import DEFAULT_PRECISION, LocalElem, hensel_sqrt
from .poly import RatFunc

RESIDUE_SEARCH_LIMIT = 10_000


# -- forms and diagonalization ------------------------------------------------

@dataclass(frozen=True)
class TernaryForm:
    """Q(v) = v^T gram v over F_q(t)."""

    gram: tuple[tuple[RatFunc, RatFunc, RatFunc], ...]

    @property
    def field(self):
        return self.gram[0][0].field

    @classmethod
    def from_matrix(cls, rows, field) -> "TernaryForm":
        gram = tuple(tuple(RatFunc.coerce(x, field) for x in row) for row in rows)
        for i in range(3):
            for j in range(3):
                if gram[i][j] != gram[j][i]:
                    raise ValueError("gram matrix must be symmetric")
        return cls(gram)

    @classmethod
    def diagonal(cls, a, b, field) -> "TernaryForm":
        z = RatFunc.coerce(0, field)
        a, b = RatFunc.coerce(a, field), RatFunc.coerce(b, field)
        return cls(((RatFunc.coerce(1, field), z, z), (z, -a, z), (z, z, -b)))

    def evaluate(self, v):
        return sum((v[i] * self.gram[i][j] * v[j] for i in range(3) for j in range(3)),
                   RatFunc.coerce(0, self.field))


def _mat_mul(A, B, zero):
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(3)), zero) for j in range(3)) for i in range(3))


def _transpose(A):
    return tuple(tuple(A[j][i] for j in range(3)) for i in range(3))


def conjugate(gram, basis):
    """basis^T * gram * basis, where the columns of ``basis`` are the new basis vectors."""
    zero = RatFunc.coerce(0, gram[0][0].field)
    return _mat_mul(_mat_mul(_transpose(basis), gram, zero), basis, zero)


@dataclass(frozen=True)
class Diagonalization:
    a: RatFunc
    b: RatFunc
    basis: tuple
    scale: RatFunc


def diagonalize(form: TernaryForm, order=(0, 1, 2)) -> Diagonalization:
    """Bring Q to scale * (x^2 - a y^2 - b z^2) by a change of basis over F_q(t)."""
    F = form.field
    if F.p == 2:  # pragma: no cover - fields reject p = 2 at construction
        from .errors import CharacteristicTwo
        raise CharacteristicTwo("diagonalization needs 2 invertible")
    one, zero = RatFunc.coerce(1, F), RatFunc.coerce(0, F)
    cols = [[one if r == c else zero for r in range(3)] for c in order]

    def basis():
        return tuple(tuple(cols[c][r] for c in range(3)) for r in range(3))

    for i in range(3):
        G = conjugate(form.gram, basis())
        if G[i][i].is_zero():
            j = next((j for j in range(i + 1, 3) if not G[j][j].is_zero()), None)
            if j is not None:
                cols[i], cols[j] = cols[j], cols[i]
            else:
                j = next((j for j in range(i + 1, 3) if not G[i][j].is_zero()), None)
                if j is None:
                    raise DegenerateForm("quadratic form has rank < 3 over F_q(t)")
                cols[i] = [x + y for x, y in zip(cols[i], cols[j])]
            G = conjugate(form.gram, basis())
        for j in range(i + 1, 3):
            if not G[i][j].is_zero():
                c = G[i][j] / G[i][i]
                cols[j] = [y - c * x for x, y in zip(cols[i], cols[j])]
    P = basis()
    D = conjugate(form.gram, P)
    for i in range(3):
        for j in range(3):
            if i != j and not D[i][j].is_zero():
                raise AssertionError("diagonalization left an off-diagonal entry")
    if any(D[i][i].is_zero() for i in range(3)):
        raise DegenerateForm("quadratic form has rank < 3 over F_q(t)")
    d1 = D[0][0]
    return Diagonalization(a=-(D[1][1] / d1), b=-(D[2][2] / d1), basis=P, scale=d1)


# -- points -------------------------------------------------------------------

@dataclass(frozen=True)
class ConicPoint:
    """A nonzero solution; coordinates are residue-field elements or local elements."""

    coords: tuple
    primitive: bool = True
    precision: int | None = None


def _solve_square(F: FqField, c: int, r: int):
    """Canonical z with c*z^2 = r, or None."""
    if not c:
        return 0 if not r else None
    s = F.div(r, c)
    if not s:
        return 0
    if not F.is_square_raw(s):
        return None
    return F.sqrt_raw(s)


def _ternary_search(F: FqField, a: int, b: int):
    """First nonzero (x, y, z) with x^2 - a y^2 - b z^2 = 0.

    Charts in order: y = 1 (x then z lexicographic), then y = 0, z = 1, then (1, 0, 0).
    """
    if F.q > RESIDUE_SEARCH_LIMIT:
        raise SearchSpaceTooLarge(f"residue field of size {F.q} exceeds {RESIDUE_SEARCH_LIMIT}")
    xs = F.lex_order()
    for x in xs:
        z = _solve_square(F, b, F.sub(F.mul(x, x), a))
        if z is not None:
            return (x, 1, z)
    for x in xs:
        if F.mul(x, x) == b:
            return (x, 0, 1)
    # last chart is the single point (1, 0, 0), on the conic only if 1 == 0
    return None


def _binary_search(F: FqField, c1: int, c2: int):
    """First nonzero (u, w) with c1 u^2 + c2 w^2 = 0: chart u = 1, then (0, 1)."""
    w = _solve_square(F, c2, F.neg(c1))
    if w is not None:
        return (1, w)
    if not c2:
        return (0, 1)
    return None


def conic_point_residue(a_bar: FqElem, b_bar: FqElem) -> ConicPoint:
    """Exhaustive search for a point of x^2 - a y^2 - b z^2 = 0 over the residue field."""
    F = a_bar.field
    found = _ternary_search(F, a_bar.n, F(b_bar).n)
    if found is None:
        raise LookupError("no point found after exhausting all charts")
    return ConicPoint(tuple(FqElem(F, c) for c in found))


def residual_vanishes(a: LocalElem, b: LocalElem, coords) -> bool:
    """Check x^2 - a y^2 - b z^2 == 0 exactly or to the common working precision."""
    x, y, z = coords
    terms = [x * x, a * (y * y), b * (z * z)]
    signs = [1, -1, -1]
    live = [(s, t) for s, t in zip(signs, terms) if not t.is_zero()]
    if not live:
        return True
    if all(t.form == "exact" for _, t in live):
        total = live[0][1] if live[0][0] > 0 else -live[0][1]
        for s, t in live[1:]:
            total = total + t if s > 0 else total - t
        return total.is_zero()
    hi = min(t.abs_precision() for _, t in live if t.form == "series")
    lo = min(t.nu() for _, t in live)
    if lo >= hi:
        return True
    F = a.place.model
    acc = [0] * (hi - lo)
    for s, t in live:
        cs = t.coefficients(lo, hi)
        acc = [F.add(u, v) if s > 0 else F.sub(u, v) for u, v in zip(acc, cs)]
    return not any(acc)


def conic_point_local(a: LocalElem, b: LocalElem, precision: int = DEFAULT_PRECISION):
    """A primitive K-point of x^2 - a y^2 - b z^2 = 0, or None if there is none.

    Valuations are first reduced to {0, 1} with square scalings of y and z.
    """
    if a.is_zero() or b.is_zero():
        raise ZeroElement("conic coefficients must be nonzero")
    b = a._check(b)
    place = a.place
    F = place.model
    va, vb = a.nu(), b.nu()
    ma, mb = va // 2, vb // 2
    a1 = a.expand(precision).shift(-2 * ma) if ma else a
    b1 = b.expand(precision).shift(-2 * mb) if mb else b
    ua, ub = a1.unit_residue_model(), b1.unit_residue_model()
    one = LocalElem.exact(place, 1)
    zero = LocalElem.zero(place)

    def const(c):
        return LocalElem.model_const(place, c, precision)

    case = (va % 2, vb % 2)
    if case == (0, 0):
        x0, y0, z0 = _ternary_search(F, ua, ub)
        if x0:
            y, z = const(y0), const(z0)
            x = hensel_sqrt(a1 * y * y + b1 * z * z, precision)
        elif y0:
            x, z = const(x0), const(z0)
            y = hensel_sqrt((x * x - b1 * z * z) / a1, precision)
        else:
            x, y = const(x0), const(y0)
            z = hensel_sqrt((x * x - a1 * y * y) / b1, precision)
        point = (x, y, z)
    elif case == (0, 1):
        # residue form x^2 - a y^2; z is free, forced to a unit if x, y vanish
        if _binary_search(F, 1, F.neg(ua)) is None:
            return None
        point = (hensel_sqrt(a1, precision), one, zero)
    elif case == (1, 0):
        if _binary_search(F, 1, F.neg(ub)) is None:
            return None
        point = (hensel_sqrt(b1, precision), zero, one)
    else:
        # x = pi x': pi x'^2 - (a/pi) y^2 - (b/pi) z^2, residue form u y^2 + v z^2
        hit = _binary_search(F, ua, ub)
        if hit is None:
            return None
        if hit[0]:
            point = (zero, one, hensel_sqrt(-(a1 / b1), precision))
        else:
            point = (zero, hensel_sqrt(-(b1 / a1), precision), one)
    x, y, z = point
    coords = (x, y.shift(-ma), z.shift(-mb))
    shift = min(c.nu() for c in coords if not c.is_zero())
    coords = tuple(c.shift(-shift) for c in coords)
    if not residual_vanishes(a, b, coords):
        raise PrecisionExhausted("lifted point does not satisfy the form at working precision")
    has_series = any(c.form == "series" for c in coords)
    return ConicPoint(coords, primitive=True, precision=precision if has_series else None)


# -- degenerate fibers --------------------------------------------------------

@dataclass(frozen=True)
class LinePair:
    """The rank-2 fiber x^2 - a y^2 = 0 over the residue field of a component."""

    base_field: FqField
    a_bar: FqElem
    split: bool
    slopes: tuple | None
    cover: str


def degenerate_fiber(a_bar: FqElem) -> LinePair:
    if not a_bar:
        raise DoubleLine("a vanishes on the component: the fiber is a double line, not two distinct lines")
    F = a_bar.field
    cover = f"s^2-{_paren(a_bar)}"
    if a_bar.is_square():
        r = a_bar.sqrt()
        return LinePair(F, a_bar, True, (r, -r), cover)
    return LinePair(F, a_bar, False, None, cover)


def _paren(x: FqElem) -> str:
    s = str(x)
    return s if ("+" not in s and "*" not in s) else f"({s})"
