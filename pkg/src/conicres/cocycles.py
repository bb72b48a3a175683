"""The unramified quadratic extension L = K(s), s^2 = a, and PGL_2 cocycles for Gal(L/K).

Elements of L are pairs (u, v) over K standing for u + v*s; nothing here needs
a completed model of L itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAUnit, SingularMatrix, SquareInput, ZeroElement
from .local import LocalElem, hensel_is_square


def _check_defining(a: LocalElem):
    if a.is_zero() or a.nu() != 0:
        raise NotAUnit("the extension is defined by a unit a")
    if hensel_is_square(a):
        raise SquareInput("a is a square: K(sqrt a) is not a field extension")


class QuadExtElem:
    __slots__ = ("a", "u", "v")

    def __init__(self, a: LocalElem, u, v=0, *, check: bool = True):
        if check:
            _check_defining(a)
        self.a = a
        self.u = LocalElem.exact(a.place, u) if not isinstance(u, LocalElem) else u
        self.v = LocalElem.exact(a.place, v) if not isinstance(v, LocalElem) else v

    @property
    def base_place(self):
        return self.a.place

    def _wrap(self, u, v):
        return QuadExtElem(self.a, u, v, check=False)

    def _coerce(self, other):
        if isinstance(other, QuadExtElem):
            return other
        return self._wrap(other, 0)

    def __add__(self, other):
        o = self._coerce(other)
        return self._wrap(self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.u, -self.v)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        o = self._coerce(other)
        return self._wrap(self.u * o.u + self.a * self.v * o.v, self.u * o.v + o.u * self.v)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.u.is_zero() and self.v.is_zero()

    def inverse(self) -> "QuadExtElem":
        n = norm(self)
        if n.is_zero():
            raise ZeroElement("inverse of zero")
        return self._wrap(self.u / n, -self.v / n)

    def __eq__(self, other):
        o = self._coerce(other)
        return self.u == o.u and self.v == o.v

    def __hash__(self):
        return hash((self.u, self.v))

    def __repr__(self):
        return f"QuadExtElem({self.u.rat if self.u.form == 'exact' else self.u} + ({self.v.rat if self.v.form == 'exact' else self.v})*s)"


def galois_sigma(x: QuadExtElem) -> QuadExtElem:
    return x._wrap(x.u, -x.v)


def norm(c: QuadExtElem) -> LocalElem:
    """Norm(u + v*s) = u^2 - a*v^2, the product c * sigma(c)."""
    if c.v.is_zero():
        return c.u * c.u
    return c.u * c.u - c.a * (c.v * c.v)


def norm_valuation_parity(c: QuadExtElem) -> int:
    """nu(Norm c) mod 2, computed from the exact norm."""
    if c.is_zero():
        raise ZeroElement("norm of zero has no valuation")
    return norm(c).nu() % 2


class Mat2L:
    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = tuple(tuple(row) for row in entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __mul__(self, other: "Mat2L") -> "Mat2L":
        e, f = self.entries, other.entries
        return Mat2L([[e[i][0] * f[0][j] + e[i][1] * f[1][j] for j in range(2)] for i in range(2)])

    def sigma(self) -> "Mat2L":
        return Mat2L([[galois_sigma(x) for x in row] for row in self.entries])

    def det(self) -> QuadExtElem:
        e = self.entries
        return e[0][0] * e[1][1] - e[0][1] * e[1][0]


@dataclass(frozen=True)
class CocycleCheck:
    is_cocycle: bool
    scalar: LocalElem | None


def cocycle_check(g: Mat2L) -> CocycleCheck:
    """g * sigma(g) == c*I with c in K?"""
    if g.det().is_zero():
        raise SingularMatrix("cocycle representative must be invertible")
    m = g * g.sigma()
    if not (m[0, 1].is_zero() and m[1, 0].is_zero() and m[0, 0] == m[1, 1]):
        return CocycleCheck(False, None)
    c = m[0, 0]
    if not c.v.is_zero():
        return CocycleCheck(False, None)
    return CocycleCheck(True, c.u)


def standard_cocycle(a: LocalElem, b: LocalElem) -> Mat2L:
    """The matrix [[0, b], [1, 0]] representing the class of (a, b), validated by h*sigma(h) = b*I."""
    _check_defining(a)
    if b.is_zero():
        raise ZeroElement("b must be nonzero")
    zero, one = QuadExtElem(a, 0, 0, check=False), QuadExtElem(a, 1, 0, check=False)
    h = Mat2L([[zero, QuadExtElem(a, b, 0, check=False)], [one, zero]])
    chk = cocycle_check(h)
    assert chk.is_cocycle and chk.scalar == b, "h * sigma(h) must equal b * I"
    return h


@dataclass(frozen=True)
class Obstruction:
    cohomologous_possible: bool
    parity_witness: int


def norm_obstruction(e: LocalElem, b: LocalElem) -> Obstruction:
    """One-sided test: b/e = Norm(c) is impossible when nu(b/e) is odd."""
    if e.is_zero() or e.nu() != 0:
        raise NotAUnit("the cocycle scalar e must be a unit")
    if b.is_zero():
        raise ZeroElement("b must be nonzero")
    parity = (b / e).nu() % 2
    return Obstruction(parity == 0, parity)


def strip_squares(b: LocalElem) -> LocalElem:
    """b / pi^(2 floor(nu(b)/2)), so the valuation drops to 0 or 1."""
    m = b.nu() // 2
    if not m:
        return b
    pi = LocalElem.exact(b.place, b.place.uniformizer)
    return b / pi ** (2 * m)
