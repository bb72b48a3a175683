"""Univariate polynomials and rational functions over a finite field.

Coefficients are held as the field's encoded integers (see :mod:`fields`),
low degree first, with trailing zeros trimmed.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .errors import DivisionByZero, FieldMismatch, ParseError, ZeroPolynomial
from .fields import FqElem, FqField, format_elem


def _trim(cs: list[int]) -> tuple[int, ...]:
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


class Poly:
    __slots__ = ("field", "c")

    def __init__(self, field: FqField, coeffs=()):
        self.field = field
        self.c = _trim([int(x) for x in coeffs]) if not isinstance(coeffs, tuple) else _trim(list(coeffs))

    # -- constructors --
    @classmethod
    def from_elems(cls, field, elems) -> "Poly":
        return cls(field, [field(e).n for e in elems])

    @classmethod
    def const(cls, field, value) -> "Poly":
        return cls(field, (field(value).n,))

    @classmethod
    def t(cls, field) -> "Poly":
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field, deg, coeff=1) -> "Poly":
        return cls(field, (0,) * deg + (field(coeff).n,))

    # -- basics --
    @property
    def degree(self) -> int:
        return len(self.c) - 1 if self.c else -1

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def coeff(self, i: int) -> FqElem:
        return FqElem(self.field, self.c[i] if i < len(self.c) else 0)

    def coeffs(self) -> list[FqElem]:
        return [FqElem(self.field, n) for n in self.c]

    @property
    def lead(self) -> FqElem:
        if not self.c:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return FqElem(self.field, self.c[-1])

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c and self.field == other.field
        if isinstance(other, int):
            return self == Poly.const(self.field, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.c))

    def sort_key(self):
        """Order by degree, then lexicographically on low-to-high coefficient tuples."""
        F = self.field
        return (self.degree, tuple(F.sort_key(n) for n in self.c))

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, FqElem)):
            return Poly.const(self.field, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    # -- ring operations --
    def __add__(self, other):
        g = self._coerce(other)
        F = self.field
        a, b = self.c, g.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = F.add(out[i], y)
        return Poly(F, tuple(out))

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly(F, tuple(F.neg(x) for x in self.c))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        g = self._coerce(other)
        F = self.field
        a, b = self.c, g.c
        if not a or not b:
            return Poly(F, ())
        if F.d == 1:
            p = F.p
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return Poly(F, tuple(v % p for v in out))
        out = [0] * (len(a) + len(b) - 1)
        add, mul = F.add, F.mul
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return Poly(F, tuple(out))

    __rmul__ = __mul__

    def scale(self, k) -> "Poly":
        F = self.field
        kn = F(k).n
        return Poly(F, tuple(F.mul(x, kn) for x in self.c))

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        g = self._coerce(other)
        if not g.c:
            raise DivisionByZero("polynomial division by zero")
        F = self.field
        r = list(self.c)
        dg = g.degree
        if len(r) <= dg:
            return Poly(F, ()), self
        inv = F.inv(g.c[-1])
        q = [0] * (len(r) - dg)
        gc = g.c
        if F.d == 1:
            p = F.p
            for i in range(len(r) - 1, dg - 1, -1):
                c = r[i] * inv % p
                if c:
                    q[i - dg] = c
                    for j in range(dg + 1):
                        r[i - dg + j] = (r[i - dg + j] - c * gc[j]) % p
        else:
            for i in range(len(r) - 1, dg - 1, -1):
                c = F.mul(r[i], inv)
                if c:
                    q[i - dg] = c
                    for j in range(dg + 1):
                        r[i - dg + j] = F.sub(r[i - dg + j], F.mul(c, gc[j]))
        return Poly(F, tuple(q)), Poly(F, tuple(r[:dg]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ValueError("division is not exact")
        return q

    def monic(self) -> "Poly":
        if not self.c:
            return self
        F = self.field
        inv = F.inv(self.c[-1])
        return Poly(F, tuple(F.mul(x, inv) for x in self.c))

    def derivative(self) -> "Poly":
        F = self.field
        return Poly(F, tuple(F.mul(x, i % F.p) for i, x in enumerate(self.c) if i))

    def __call__(self, x, embed=None):
        return self.eval(x, embed)

    def eval(self, x, embed=None):
        """Horner evaluation at an element of this field or (via ``embed``) of an extension."""
        if isinstance(x, Poly):
            acc = Poly(x.field, ())
            for n in reversed(self.c):
                acc = acc * x + Poly(x.field, (n,))
            return acc
        if embed is None:
            if x.field != self.field:
                raise FieldMismatch("supply an embedding to evaluate in another field")
            embed = lambda n: n  # noqa: E731
        K = x.field
        acc = 0
        for n in reversed(self.c):
            acc = K.add(K.mul(acc, x.n), embed(n))
        return FqElem(K, acc)

    def powmod(self, e: int, m: "Poly") -> "Poly":
        result = Poly.const(self.field, 1) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def pth_root(self) -> "Poly":
        """For f(t) = g(t^p), return g with its coefficients replaced by p-th roots."""
        F = self.field
        p = F.p
        e = F.q // p  # x -> x^(q/p) inverts Frobenius on F_q
        return Poly(F, tuple(F.pow(self.c[i], e) for i in range(0, len(self.c), p)))

    def __repr__(self):
        return f"Poly({format_poly(self)} over {self.field})"

    def __str__(self):
        return format_poly(self)


def _gcd_prime(a: list, b: list, p: int) -> list:
    # Euclid on trimmed coefficient lists over F_p, result monic
    while b:
        inv = pow(b[-1], p - 2, p)
        db = len(b) - 1
        while len(a) > db:
            c = a[-1] * inv % p
            off = len(a) - 1 - db
            for j in range(db):
                a[off + j] = (a[off + j] - c * b[j]) % p
            a.pop()
            while a and not a[-1]:
                a.pop()
        a, b = b, a
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def poly_gcd(f: Poly, g: Poly) -> Poly:
    F = f.field
    if F.d == 1:
        return Poly(F, tuple(_gcd_prime(list(f.c), list(g.c), F.p)))
    while g:
        f, g = g, f % g
    return f.monic()


def poly_xgcd(f: Poly, g: Poly):
    """Return (d, s, u) with s*f + u*g = d monic."""
    F = f.field
    r0, r1 = f, g
    s0, s1 = Poly.const(F, 1), Poly(F, ())
    u0, u1 = Poly(F, ()), Poly.const(F, 1)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    if not r0:
        return r0, s0, u0
    inv = F.inv(r0.c[-1])
    return r0.scale(FqElem(F, inv)), s0.scale(FqElem(F, inv)), u0.scale(FqElem(F, inv))


def poly_arith(f: Poly, g, op: str):
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "divrem":
        return divmod(f, g)
    if op == "gcd":
        return poly_gcd(f, g)
    if op == "derivative":
        return f.derivative()
    if op == "eval":
        return f.eval(g)
    raise ValueError(f"unknown op {op!r}")


# -- factorization ------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    unit: FqElem
    factors: tuple[tuple[Poly, int], ...]

    def expand(self) -> Poly:
        F = self.unit.field
        out = Poly.const(F, self.unit)
        for f, m in self.factors:
            out = out * f**m
        return out

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Monic f -> [(g_i, m_i)] with f = prod g_i^m_i, the g_i squarefree and coprime."""
    F = f.field
    p = F.p
    out: dict[int, Poly] = {}

    def merge(g, m):
        if g.degree > 0:
            out[m] = out[m] * g if m in out else g

    def rec(f, mult):
        if f.degree <= 0:
            return
        df = f.derivative()
        if not df:
            rec(f.pth_root(), mult * p)
            return
        c = poly_gcd(f, df)
        w = f // c
        i = 1
        while w.degree > 0:
            y = poly_gcd(w, c)
            merge((w // y).monic(), i * mult)
            w, c = y, c // y
            i += 1
        if c.degree > 0:
            rec(c.pth_root(), mult * p)

    rec(f.monic(), 1)
    return sorted(((g, m) for m, g in out.items()), key=lambda gm: gm[1])


def distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Squarefree monic f -> [(product of all degree-i factors, i)]."""
    F = f.field
    q = F.q
    out = []
    x = Poly.t(F)
    h = x % f
    i = 0
    while f.degree >= 2 * (i + 1):
        i += 1
        h = h.powmod(q, f)
        g = poly_gcd(f, h - x)
        if g.degree > 0:
            out.append((g, i))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def equal_degree(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Split a squarefree monic f whose irreducible factors all have degree d."""
    if f.degree == d:
        return [f]
    F = f.field
    e = (F.q**d - 1) // 2
    while True:
        a = Poly(F, [rng.randrange(F.q) for _ in range(f.degree)])
        if a.degree <= 0:
            continue
        g = poly_gcd(f, a)
        if 0 < g.degree < f.degree:
            break
        g = poly_gcd(f, a.powmod(e, f) - 1)
        if 0 < g.degree < f.degree:
            break
    return equal_degree(g, d, rng) + equal_degree(f // g, d, rng)


def poly_factor(f: Poly, rng: random.Random | None = None) -> Factorization:
    """Complete factorization into monic irreducibles (sorted output independent of rng)."""
    if not f:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    rng = rng if rng is not None else random.Random(0)
    F = f.field
    unit = f.lead
    acc: dict[Poly, int] = {}
    for g, m in squarefree_decomposition(f):
        for h, d in distinct_degree(g):
            for irr in equal_degree(h, d, rng):
                acc[irr] = acc.get(irr, 0) + m
    factors = tuple(sorted(acc.items(), key=lambda fm: fm[0].sort_key()))
    return Factorization(FqElem(F, unit.n), factors)


def is_irreducible(f: Poly) -> bool:
    if f.degree < 1:
        return False
    g = f.monic()
    sf = squarefree_decomposition(g)
    if len(sf) != 1 or sf[0][1] != 1:
        return False
    dd = distinct_degree(g)
    return len(dd) == 1 and dd[0][1] == g.degree


def poly_roots(f: Poly, rng: random.Random | None = None) -> list[FqElem]:
    """Distinct roots of f in its coefficient field, sorted lexicographically."""
    if not f:
        raise ZeroPolynomial("every element is a root of 0")
    rng = rng if rng is not None else random.Random(0)
    F = f.field
    g = f.monic()
    x = Poly.t(F)
    lin = poly_gcd(g, x.powmod(F.q, g) - x)
    if lin.degree <= 0:
        return []
    roots = [FqElem(F, F.neg(h.c[0])) for h in equal_degree(lin, 1, rng)]
    return sorted(roots, key=lambda r: r.sort_key())


# -- rational functions -------------------------------------------------------

class RatFunc:
    """Reduced quotient num/den with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduce: bool = True):
        F = num.field
        if den is None:
            den = Poly.const(F, 1)
        if not den:
            raise DivisionByZero("zero denominator")
        if reduce and den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        if not den.is_monic():
            inv = den.lead.inverse()
            num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @classmethod
    def coerce(cls, x, field=None) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return cls(x)
        return cls(Poly.const(field, x))

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (Poly, int)):
            other = RatFunc.coerce(other, self.field)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = RatFunc.coerce(other, self.field)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if self.den.degree == 0 or o.den.degree == 0:
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den, reduce=False)
        g = poly_gcd(self.den, o.den)
        if g.degree == 0:
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den, reduce=False)
        d1, d2 = self.den // g, o.den // g
        return RatFunc(self.num * d2 + o.num * d1, d1 * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other, self.field))

    def __rsub__(self, other):
        return RatFunc.coerce(other, self.field) - self

    def __mul__(self, other):
        o = RatFunc.coerce(other, self.field)
        if not self.num or not o.num:
            return RatFunc(Poly(self.field, ()), reduce=False)
        # cross-cancel so the product comes out reduced
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if d2.degree > 0:
            g = poly_gcd(n1, d2)
            if g.degree > 0:
                n1, d2 = n1 // g, d2 // g
        if d1.degree > 0:
            g = poly_gcd(n2, d1)
            if g.degree > 0:
                n2, d1 = n2 // g, d1 // g
        return RatFunc(n1 * n2, d1 * d2, reduce=False)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return RatFunc(self.den, self.num, reduce=False)

    def __truediv__(self, other):
        return self * RatFunc.coerce(other, self.field).inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other, self.field) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num**e, self.den**e, reduce=False)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.degree == 0:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


# -- text grammar -------------------------------------------------------------

def _format_coeff(x: FqElem) -> str:
    if x.field.d == 1:
        return str(x.n)
    s = format_elem(x, "g")
    return s if "+" not in s and "*" not in s else f"({s})"


def format_poly(f: Poly, var: str = "t") -> str:
    """Serialize in the input grammar: decreasing degree, `^` powers, no spaces."""
    if not f.c:
        return "0"
    parts = []
    for i in range(len(f.c) - 1, -1, -1):
        n = f.c[i]
        if not n:
            continue
        c = _format_coeff(FqElem(f.field, n))
        if i == 0:
            term = c
        else:
            mono = var if i == 1 else f"{var}^{i}"
            term = mono if n == 1 else f"{c}*{mono}"
        parts.append(term)
    return "+".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([tg])|(\*\*|[-+*^()/]))")


def parse_poly(text: str, field: FqField) -> Poly:
    """Parse integers, `t`, `+ - * ^` and parentheses; `g` is the generator of F_q when d > 1."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        tokens.append(m.group(1) or m.group(2) or ("^" if m.group(3) == "**" else m.group(3)))
        pos = m.end()
    if not tokens:
        raise ParseError("empty expression")
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else None

    def take():
        nonlocal i
        tok = peek()
        i += 1
        return tok

    def expr():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        acc = term()
        if sign < 0:
            acc = -acc
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = power()
        while peek() in ("*", "(", "t", "g") or (peek() or "").isdigit():
            if peek() == "*":
                take()
            acc = acc * power()
        return acc

    def power():
        base = atom()
        if peek() == "^":
            take()
            tok = take()
            if tok is None or not tok.isdigit():
                raise ParseError("exponent must be a nonnegative integer")
            return base ** int(tok)
        return base

    def atom():
        tok = take()
        if tok is None:
            raise ParseError("unexpected end of expression")
        if tok.isdigit():
            return Poly.const(field, int(tok))
        if tok == "t":
            return Poly.t(field)
        if tok == "g":
            if field.d == 1:
                raise ParseError("`g` (field generator) needs --d > 1")
            return Poly.const(field, field.gen())
        if tok == "(":
            inner = expr()
            if take() != ")":
                raise ParseError("missing closing parenthesis")
            return inner
        if tok == "-":
            return -power()
        raise ParseError(f"unexpected token {tok!r}")

    result = expr()
    if i != len(tokens):
        raise ParseError(f"trailing input starting at token {tokens[i]!r}")
    return result
