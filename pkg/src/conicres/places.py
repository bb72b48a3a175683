"""Closed points of the line over F_q and their residue fields.

A finite place is a monic irreducible ``pi``; its residue field is F_q[t]/(pi).
Residues are computed in that natural model and transported to the canonical
field ``fq_make(p, d * deg pi)`` through an isomorphism sending the class of
``t`` to the lexicographically smallest root of ``pi``.  The isomorphism is
only computed when a canonical element is actually requested; square-class
questions are isomorphism invariant and never need it.
"""

from __future__ import annotations

import random

from .errors import NegativeValuation, NotMonic, Reducible, ZeroElement
from .fields import FqElem, FqField, fq_make
from .poly import Poly, RatFunc, is_irreducible, poly_roots

INFINITY = "inf"

_CACHE: dict = {}


class Place:
    __slots__ = ("field", "pi", "degree", "residue_field", "model", "_gen_image", "_rho", "_theta")

    def __init__(self, field: FqField, pi: Poly | None):
        self.field = field
        self.pi = pi
        self.degree = 1 if pi is None else pi.degree
        self.residue_field = fq_make(field.p, field.d * self.degree)
        self._gen_image = None
        self._rho = None
        self._theta = None
        k = self.residue_field
        if pi is None:
            self.model = field
        elif field.d == 1:
            self.model = k if self.degree == 1 else FqField(field.p, pi.c, check=False, tables=False)
        else:
            self.model = k

    @property
    def is_infinity(self) -> bool:
        return self.pi is None

    @property
    def kind(self) -> str:
        return "infinity" if self.pi is None else "finite"

    def __eq__(self, other):
        return isinstance(other, Place) and self.field == other.field and self.pi == other.pi

    def __hash__(self):
        return hash((self.field, self.pi))

    def __repr__(self):
        return f"Place({self} over {self.field})"

    def __str__(self):
        return INFINITY if self.pi is None else str(self.pi)

    def sort_key(self):
        return (1, ()) if self.pi is None else (0, self.pi.sort_key())

    @property
    def uniformizer(self) -> RatFunc:
        F = self.field
        if self.pi is None:
            return RatFunc(Poly.const(F, 1), Poly.t(F))
        return RatFunc(self.pi)

    # -- embeddings into the canonical residue field --
    def rho(self) -> int:
        """Image in the canonical residue field of the generator of F_q (d > 1)."""
        if self._rho is None:
            F, k = self.field, self.residue_field
            if F == k:
                self._rho = F.gen().n
            else:
                modulus = Poly(k, F.modulus)  # F_p coefficients encode identically
                self._rho = poly_roots(modulus, random.Random(0))[0].n
        return self._rho

    def embed_const(self, n: int) -> int:
        """Canonical image of an F_q element (encoded int)."""
        F, k = self.field, self.residue_field
        if F.d == 1:
            return n
        if F == k:
            return n
        r = self.rho()
        acc = 0
        for c in reversed(F.digits(n)):
            acc = k.add(k.mul(acc, r), c)
        return acc

    def theta(self) -> int:
        """Lexicographically smallest root of pi in the canonical residue field."""
        if self._theta is None:
            k = self.residue_field
            pik = Poly(k, [self.embed_const(n) for n in self.pi.c])
            self._theta = poly_roots(pik, random.Random(0))[0].n
        return self._theta

    def to_canonical(self, n: int) -> FqElem:
        """Map a model residue (encoded int) to the canonical residue field."""
        k = self.residue_field
        if self.model is k or self.model == k:
            return FqElem(k, n)
        if self._gen_image is None:
            self._gen_image = self.theta() if self.pi is not None else self.rho()
        g = self._gen_image
        acc = 0
        for c in reversed(self.model.digits(n)):
            acc = k.add(k.mul(acc, g), c)
        return FqElem(k, acc)

    def from_canonical(self, x: FqElem) -> int:
        """Inverse of :meth:`to_canonical` (linear algebra over F_p)."""
        model = self.model
        if model is self.residue_field or model == self.residue_field:
            return x.n
        basis = [self.to_canonical(model.undigits([1 if j == i else 0 for j in range(model.d)])).coeffs
                 for i in range(model.d)]
        sol = _solve_mod_p(basis, x.coeffs, model.p)
        return model.undigits(sol)

    # -- reduction of polynomials --
    def split(self, f: Poly) -> tuple[int, Poly]:
        """(e, g) with f = pi^e * g and pi not dividing g (finite places)."""
        if not f:
            raise ZeroElement("valuation of zero")
        e = 0
        pi = self.pi
        if pi.degree == 1 and pi.c[0] == 0:
            while f.c[0] == 0:
                f = Poly(f.field, f.c[1:])
                e += 1
            return e, f
        while True:
            q, r = divmod(f, pi)
            if r:
                return e, f
            f, e = q, e + 1

    def reduce(self, f: Poly) -> int:
        """Model residue of a polynomial (finite places)."""
        r = f % self.pi
        if not r.c:
            return 0
        if self.model is self.residue_field and self.field.d > 1:
            k = self.model
            th = self.theta()
            acc = 0
            for n in reversed(r.c):
                acc = k.add(k.mul(acc, th), self.embed_const(n))
            return acc
        if self.degree == 1:
            return r.c[0]
        return self.model.undigits(r.c)

    def lift(self, x: FqElem) -> Poly:
        """A polynomial of degree < deg pi whose residue is the canonical element x."""
        if x.field != self.residue_field:
            raise ValueError("element is not in this place's residue field")
        F = self.field
        if self.pi is None:
            n = self.from_canonical(x)
            return Poly(F, (n,))
        if F.d == 1:
            n = self.from_canonical(x)
            return Poly(F, self.model.digits(n))
        # d > 1: basis rho^i theta^j over F_p
        k = self.residue_field
        th = self.theta()
        rows, labels = [], []
        for j in range(self.degree):
            thj = k.pow(th, j)
            for i in range(F.d):
                rows.append(k.digits(k.mul(k.pow(self.rho(), i), thj)))
                labels.append((i, j))
        sol = _solve_mod_p(rows, x.coeffs, F.p)
        coeffs = [[0] * F.d for _ in range(self.degree)]
        for (i, j), c in zip(labels, sol):
            coeffs[j][i] = c
        return Poly(F, [F.undigits(cs) for cs in coeffs])


def _solve_mod_p(columns, target, p):
    """Solve sum_i c_i * columns[i] = target over F_p (square, invertible system)."""
    n = len(columns)
    mat = [[columns[j][i] % p for j in range(n)] + [target[i] % p] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if mat[r][col])
        mat[col], mat[piv] = mat[piv], mat[col]
        inv = pow(mat[col][col], -1, p)
        mat[col] = [v * inv % p for v in mat[col]]
        for r in range(n):
            if r != col and mat[r][col]:
                f = mat[r][col]
                mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[col])]
    return [mat[i][n] for i in range(n)]


def place_make(pi, field: FqField | None = None) -> Place:
    """Build (and cache) the place of a monic irreducible polynomial, or infinity."""
    if isinstance(pi, str):
        if pi != INFINITY:
            raise ValueError(f"unknown place marker {pi!r}")
        if field is None:
            raise ValueError("the infinite place needs an explicit field")
        key = (field, None)
        if key not in _CACHE:
            _CACHE[key] = Place(field, None)
        return _CACHE[key]
    key = (pi.field, pi)
    place = _CACHE.get(key)
    if place is None:
        if not pi.is_monic():
            raise NotMonic(f"{pi} is not monic")
        if not is_irreducible(pi):
            raise Reducible(f"{pi} is reducible")
        place = _CACHE[key] = Place(pi.field, pi)
    return place


def residue_at(f, place: Place) -> FqElem:
    """Image in the residue field of a polynomial or rational function of valuation >= 0."""
    from .local import LocalElem

    x = f if isinstance(f, LocalElem) else LocalElem.exact(place, f)
    k = place.residue_field
    if x.is_zero():
        return k.zero
    v = x.nu()
    if v < 0:
        raise NegativeValuation(f"{f} has valuation {v} at {place}")
    if v > 0:
        return k.zero
    return x.unit_residue()
