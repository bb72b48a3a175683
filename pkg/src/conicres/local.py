"""Completions of F_q(t) at a place: valuations, unit residues, squares, Hensel lifting.

A :class:`LocalElem` is either an exact rational function (the form every
symbol and residue computation uses) or a truncated Laurent series in the
uniformizer with residue-field coefficients (used only for Hensel witnesses and
the conic point search).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .errors import NotASquare, PlaceMismatch, PrecisionExhausted, ZeroElement
from .fields import FqElem, FqField, canonical_nonsquare
from .places import Place
from .poly import RatFunc

DEFAULT_PRECISION = 24


# -- power-series kernels on lists of model-encoded ints ------------------------

_SLOT = 1 << 64


def _kron_mul(a, b, n, p):
    # Kronecker substitution: pack into 64-bit slots, one big-int product, unpack
    a, b = a[:n], b[:n]
    A = int.from_bytes(struct.pack(f"<{len(a)}Q", *a), "little")
    B = int.from_bytes(struct.pack(f"<{len(b)}Q", *b), "little")
    C = ((A * B) & ((1 << (64 * n)) - 1)).to_bytes(8 * n, "little")
    return [v % p for v in struct.unpack(f"<{n}Q", C)]


def _smul(F: FqField, a, b, n):
    if F.d == 1 and n * (F.p - 1) ** 2 < _SLOT:
        return _kron_mul(a, b, n, F.p)
    out = [0] * n
    if F.d == 1:
        p = F.p
        for i, x in enumerate(a[:n]):
            if x:
                for j, y in enumerate(b[:n - i]):
                    out[i + j] += x * y
        return [v % p for v in out]
    add, mul = F.add, F.mul
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[:n - i]):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return out


def _taylor_shift(F: FqField, coeffs, c, n):
    """First n coefficients of g(c + u) for g with the given model coefficients."""
    cs = list(coeffs)
    out = []
    for _ in range(min(n, len(cs))):
        # synthetic division by (u - c): remainder is the next Taylor coefficient
        acc = 0
        for i in range(len(cs) - 1, -1, -1):
            acc, cs[i] = F.add(F.mul(acc, c), cs[i]), acc
        out.append(acc)
        cs = cs[:-1]
    return out + [0] * (n - len(out))


def _sinv(F: FqField, a, n):
    b0 = F.inv(a[0])
    out = [b0]
    la = len(a)
    if F.d == 1:
        p = F.p
        nb0 = p - b0
        for k in range(1, n):
            acc = 0
            for i in range(1, min(k, la - 1) + 1):
                acc += a[i] * out[k - i]
            out.append(nb0 * acc % p)
        return out
    for k in range(1, n):
        acc = 0
        for i in range(1, min(k, la - 1) + 1):
            if a[i]:
                acc = F.add(acc, F.mul(a[i], out[k - i]))
        out.append(F.neg(F.mul(b0, acc)))
    return out


def _ssqrt(F: FqField, a, n, y0):
    inv2y0 = F.inv(F.add(y0, y0))
    out = [y0]
    if F.d == 1:
        p = F.p
        for k in range(1, n):
            acc = a[k] if k < len(a) else 0
            for i in range(1, k):
                acc -= out[i] * out[k - i]
            out.append(acc * inv2y0 % p)
        return out
    for k in range(1, n):
        acc = a[k] if k < len(a) else 0
        for i in range(1, k):
            acc = F.sub(acc, F.mul(out[i], out[k - i]))
        out.append(F.mul(acc, inv2y0))
    return out


def _seval(F: FqField, coeffs, X, n):
    acc = [0] * n
    for c in reversed(coeffs):
        acc = _smul(F, acc, X, n)
        acc[0] = F.add(acc[0], c)
    return acc


_T_SERIES: dict = {}


def _const_to_model(place: Place, n: int) -> int:
    if place.field.d == 1:
        return n
    return place.embed_const(n)


def _t_series(place: Place, n: int):
    """Expansion of t in the uniformizer pi at a finite place: pi(X) = pi, X(0) = class of t."""
    cached = _T_SERIES.get(place)
    if cached is not None and len(cached) >= n:
        return cached[:n]
    F = place.model
    if place.degree == 1:
        theta = _const_to_model(place, place.field.neg(place.pi.c[0]))
        X = [theta, 1] + [0] * max(0, n - 2)
        X = X[:n] if n >= 2 else [theta]
    else:
        if place.field.d == 1:
            theta = F.undigits([0, 1])
        else:
            theta = place.theta()
        pic = [_const_to_model(place, c) for c in place.pi.c]
        dpic = [F.mul(c, i % F.p) for i, c in enumerate(pic)][1:]
        X = [theta] + [0] * (n - 1)
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            val = _seval(F, pic, X[:prec], prec)
            if prec > 1:
                val[1] = F.sub(val[1], 1)
            der = _seval(F, dpic, X[:prec], prec)
            corr = _smul(F, val, _sinv(F, der, prec), prec)
            X = [F.sub(x, c) for x, c in zip(X[:prec], corr)] + X[prec:]
    _T_SERIES[place] = X
    return X


class LocalElem:
    """Element of the completion of F_q(t) at ``place``."""

    __slots__ = ("place", "form", "rat", "val", "_c", "_nu", "_ur", "_exp")

    def __init__(self, place, form, rat=None, val=None, coeffs=None):
        self.place = place
        self.form = form
        self.rat = rat
        self.val = val
        self._c = coeffs
        self._nu = val if form == "series" else None
        self._ur = coeffs[0] if form == "series" else None
        self._exp = None

    # -- constructors --
    @classmethod
    def exact(cls, place: Place, value) -> "LocalElem":
        if isinstance(value, LocalElem):
            return value
        rat = RatFunc.coerce(value, place.field)
        if rat.is_zero():
            return cls.zero(place)
        return cls(place, "exact", rat=rat)

    @classmethod
    def zero(cls, place: Place) -> "LocalElem":
        return cls(place, "zero")

    @classmethod
    def series(cls, place: Place, valuation: int, coeffs) -> "LocalElem":
        """Series from residue-field coefficients (canonical FqElems or model ints)."""
        model = [place.from_canonical(c) if isinstance(c, FqElem) else int(c) for c in coeffs]
        return cls._from_model(place, valuation, model)

    @classmethod
    def _from_model(cls, place, valuation, model):
        i = 0
        while i < len(model) and model[i] == 0:
            i += 1
        if i == len(model):
            raise PrecisionExhausted("no significant coefficient left")
        return cls(place, "series", val=valuation + i, coeffs=tuple(model[i:]))

    @classmethod
    def model_const(cls, place: Place, c: int, precision: int) -> "LocalElem":
        if not c:
            return cls.zero(place)
        return cls(place, "series", val=0, coeffs=(c,) + (0,) * (precision - 1))

    # -- inspection --
    def is_zero(self) -> bool:
        return self.form == "zero"

    def __bool__(self):
        return self.form != "zero"

    @property
    def precision(self):
        return len(self._c) if self.form == "series" else None

    @property
    def unit_coeffs(self) -> list[FqElem]:
        if self.form != "series":
            raise ValueError("only series have unit coefficients; call expand first")
        return [self.place.to_canonical(c) for c in self._c]

    def _analyse(self):
        if self.form == "zero":
            raise ZeroElement("zero has no valuation")
        if self._nu is not None:
            return
        place = self.place
        num, den = self.rat.num, self.rat.den
        if place.is_infinity:
            F = place.field
            self._nu = den.degree - num.degree
            self._ur = F.div(num.c[-1], den.c[-1])
            return
        e1, g1 = place.split(num)
        e2, g2 = place.split(den) if den.degree > 0 else (0, den)
        self._nu = e1 - e2
        self._ur = place.model.div(place.reduce(g1), place.reduce(g2))

    def nu(self) -> int:
        self._analyse()
        return self._nu

    def unit_residue_model(self) -> int:
        self._analyse()
        return self._ur

    def unit_residue(self) -> FqElem:
        return self.place.to_canonical(self.unit_residue_model())

    # -- series expansion --
    def expand(self, precision: int = DEFAULT_PRECISION) -> "LocalElem":
        if self.form == "zero":
            return self
        if self.form == "series":
            if precision > len(self._c):
                raise PrecisionExhausted(f"stored precision {len(self._c)} < {precision}")
            return LocalElem(self.place, "series", val=self.val, coeffs=self._c[:precision])
        cached = self._exp
        if cached is not None and len(cached._c) >= precision:
            return cached if len(cached._c) == precision else cached.expand(precision)
        place, F = self.place, self.place.model
        num, den = self.rat.num, self.rat.den
        if place.is_infinity:
            def ser(f):
                rc = list(reversed(f.c))[:precision]
                return rc + [0] * (precision - len(rc))
            cn, cd = ser(num), ser(den)
            val = den.degree - num.degree
        else:
            e1, g1 = place.split(num)
            e2, g2 = place.split(den) if den.degree > 0 else (0, den)
            gn = [_const_to_model(place, c) for c in g1.c]
            gd = [_const_to_model(place, c) for c in g2.c]
            if place.degree == 1:
                root = _const_to_model(place, place.field.neg(place.pi.c[0]))
                cn = _taylor_shift(F, gn, root, precision)
                cd = _taylor_shift(F, gd, root, precision)
            else:
                X = _t_series(place, precision)
                cn = _seval(F, gn, X, precision)
                cd = _seval(F, gd, X, precision)
            val = e1 - e2
        coeffs = _smul(F, cn, _sinv(F, cd, precision), precision)
        self._exp = LocalElem(place, "series", val=val, coeffs=tuple(coeffs))
        return self._exp

    def shift(self, k: int) -> "LocalElem":
        """self * pi^k without any polynomial arithmetic on series."""
        if self.form == "zero" or not k:
            return self
        if self.form == "series":
            return LocalElem(self.place, "series", val=self.val + k, coeffs=self._c)
        return LocalElem(self.place, "exact", rat=self.rat * self.place.uniformizer**k)

    def abs_precision(self):
        return None if self.form != "series" else self.val + len(self._c)

    def coefficients(self, lo: int, hi: int) -> list[int]:
        """Model coefficients of pi^lo .. pi^(hi-1)."""
        if self.form == "zero":
            return [0] * (hi - lo)
        s = self if self.form == "series" else self.expand(max(1, hi - self.nu()))
        if hi > s.abs_precision():
            raise PrecisionExhausted(f"coefficient pi^{hi - 1} beyond precision")
        return [s._c[j - s.val] if 0 <= j - s.val < len(s._c) else 0 for j in range(lo, hi)]

    # -- arithmetic --
    def _check(self, other) -> "LocalElem":
        if not isinstance(other, LocalElem):
            other = LocalElem.exact(self.place, other)
        elif other.place != self.place:
            raise PlaceMismatch(f"{self.place} vs {other.place}")
        return other

    def _prec_with(self, other):
        ps = [x.precision for x in (self, other) if x.form == "series"]
        return min(ps) if ps else None

    def __mul__(self, other):
        o = self._check(other)
        if self.form == "zero" or o.form == "zero":
            return LocalElem.zero(self.place)
        n = self._prec_with(o)
        if n is None:
            return LocalElem(self.place, "exact", rat=self.rat * o.rat)
        a, b = self.expand(n), o.expand(n)
        return LocalElem(self.place, "series", val=a.val + b.val,
                         coeffs=tuple(_smul(self.place.model, a._c, b._c, n)))

    __rmul__ = __mul__

    def inverse(self) -> "LocalElem":
        if self.form == "zero":
            raise ZeroElement("inverse of zero")
        if self.form == "exact":
            return LocalElem(self.place, "exact", rat=self.rat.inverse())
        return LocalElem(self.place, "series", val=-self.val,
                         coeffs=tuple(_sinv(self.place.model, self._c, len(self._c))))

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __neg__(self):
        if self.form == "zero":
            return self
        if self.form == "exact":
            return LocalElem(self.place, "exact", rat=-self.rat)
        F = self.place.model
        return LocalElem(self.place, "series", val=self.val, coeffs=tuple(F.neg(c) for c in self._c))

    def __add__(self, other):
        o = self._check(other)
        if self.form == "zero":
            return o
        if o.form == "zero":
            return self
        if self.form == "exact" and o.form == "exact":
            s = self.rat + o.rat
            return LocalElem.zero(self.place) if s.is_zero() else LocalElem(self.place, "exact", rat=s)
        hi = min(x.abs_precision() for x in (self, o) if x.form == "series")
        lo = min(self.nu(), o.nu())
        if lo >= hi:
            raise PrecisionExhausted("sum has no significant coefficient")
        F = self.place.model
        ca, cb = self.coefficients(lo, hi), o.coefficients(lo, hi)
        return LocalElem._from_model(self.place, lo, [F.add(x, y) for x, y in zip(ca, cb)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if self.form == "exact":
            return LocalElem(self.place, "exact", rat=self.rat**e)
        result = LocalElem.exact(self.place, 1)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, LocalElem):
            try:
                other = LocalElem.exact(self.place, other)
            except Exception:
                return NotImplemented
        if self.place != other.place or self.form != other.form:
            return False
        if self.form == "zero":
            return True
        if self.form == "exact":
            return self.rat == other.rat
        return self.val == other.val and self._c == other._c

    def __hash__(self):
        return hash((self.place, self.form, self.rat, self.val, self._c))

    def __repr__(self):
        if self.form == "zero":
            return f"LocalElem(0 @ {self.place})"
        if self.form == "exact":
            return f"LocalElem({self.rat} @ {self.place})"
        shown = ", ".join(str(c) for c in self.unit_coeffs[:6])
        return f"LocalElem(pi^{self.val}*[{shown}{', ...' if len(self._c) > 6 else ''}] @ {self.place})"


def as_local(place: Place, x) -> LocalElem:
    return LocalElem.exact(place, x)


def nu(x: LocalElem) -> int:
    return x.nu()


def unit_residue(x: LocalElem) -> FqElem:
    return x.unit_residue()


def expand(x: LocalElem, precision: int = DEFAULT_PRECISION) -> LocalElem:
    return x.expand(precision)


def hensel_is_square(x: LocalElem) -> bool:
    """Square in K iff the valuation is even and the unit residue is a square in k."""
    if x.is_zero():
        raise ZeroElement("0 is not classified")
    return x.nu() % 2 == 0 and x.place.model.is_square_raw(x.unit_residue_model())


def _canonical_root(place: Place, y0: int) -> int:
    F = place.model
    ny0 = F.neg(y0)
    if place.model is place.residue_field:
        return min(y0, ny0, key=F.sort_key)
    a, b = place.to_canonical(y0), place.to_canonical(ny0)
    return y0 if a.sort_key() <= b.sort_key() else ny0


def hensel_sqrt(x: LocalElem, precision: int = DEFAULT_PRECISION) -> LocalElem:
    """Series square root, lifted coefficient by coefficient from the canonical residue root."""
    if x.is_zero():
        raise ZeroElement("square root of zero")
    if not hensel_is_square(x):
        raise NotASquare(f"{x} is not a square in the completion")
    place, F = x.place, x.place.model
    s = x.expand(precision)
    y0 = _canonical_root(place, F.sqrt_raw(s._c[0]))
    coeffs = _ssqrt(F, s._c, precision, y0)
    return LocalElem(place, "series", val=s.val // 2, coeffs=tuple(coeffs))


# -- square classes -----------------------------------------------------------

@dataclass(frozen=True)
class SquareClass:
    """An element of k*/k*^2 (kind 'residue') or K*/K*^2 (kind 'local')."""

    kind: str
    field: FqField
    unit_square: bool
    odd: bool = False
    place: Place | None = None

    @property
    def trivial(self) -> bool:
        return self.unit_square and not self.odd

    @property
    def label(self) -> str:
        if self.kind == "residue":
            return "1" if self.unit_square else "u0"
        base = "1" if self.unit_square else "u0"
        if not self.odd:
            return base
        return "pi" if self.unit_square else "u0*pi"

    @property
    def representative(self):
        u0 = canonical_nonsquare(self.field)
        if self.kind == "residue":
            return self.field.one if self.unit_square else u0
        place = self.place
        unit = RatFunc.coerce(1, place.field) if self.unit_square else RatFunc(place.lift(u0))
        if self.odd:
            unit = unit * place.uniformizer
        return LocalElem.exact(place, unit)

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if (self.kind, self.field, self.place) != (other.kind, other.field, other.place):
            raise ValueError("square classes live in different groups")
        return SquareClass(self.kind, self.field, self.unit_square == other.unit_square,
                           self.odd != other.odd, self.place)

    def __pow__(self, e: int) -> "SquareClass":
        if e % 2 == 0:
            return SquareClass(self.kind, self.field, True, False, self.place)
        return self

    def character(self) -> int:
        """The +-1 value of the quadratic character (residue classes of finite fields)."""
        return 1 if self.trivial else -1


def residue_class_of(field: FqField, is_square: bool) -> SquareClass:
    return SquareClass("residue", field, is_square)


def square_class(x) -> SquareClass:
    if isinstance(x, FqElem):
        if not x:
            raise ZeroElement("0 has no square class")
        return SquareClass("residue", x.field, x.is_square())
    if x.is_zero():
        raise ZeroElement("0 has no square class")
    place = x.place
    return SquareClass("local", place.residue_field, place.model.is_square_raw(x.unit_residue_model()),
                       x.nu() % 2 == 1, place)
