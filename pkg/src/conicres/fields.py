"""Finite fields F_{p^d} for odd p.

Elements are stored internally as integers ``n = c0 + c1*p + ... `` where
``(c0, c1, ...)`` are the coordinates in the power basis of the modulus.  The
field object does all arithmetic on these integers; :class:`FqElem` is the thin
public wrapper.  Fields of moderate size use log/Zech tables, larger ones fall
back to coefficient arithmetic.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import (
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    NotASquare,
    NotPrime,
    Reducible,
    ZeroInput,
)

TABLE_LIMIT = 1 << 15


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    if n % 3 == 0:
        return n == 3
    i = 5
    while i * i <= n:
        if n % i == 0 or n % (i + 2) == 0:
            return False
        i += 6
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- raw polynomials over F_p (lists of ints, low-to-high) used to vet moduli --

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _ptrim(a[:dm] if len(a) > dm else a)


def _pmulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod([c % p for c in out], m, p)


def _ppowmod(a, e, m, p):
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _ptrim([(x - y) % p for x, y in zip(a, b)])


def irreducible_mod_p(f, p: int) -> bool:
    """Rabin's test for a monic f (coefficients low-to-high) over F_p."""
    f = _ptrim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for r in _prime_factors(n):
        h = _ppowmod(x, p ** (n // r), f, p)
        if len(_pgcd(f, _psub(h, x, p), p)) != 1:
            return False
    return not _psub(_ppowmod(x, p**n, f, p), x, p)


class FqField:
    """The field F_p[x]/(modulus)."""

    def __init__(self, p: int, modulus, *, check: bool = True, tables: bool | None = None):
        if p == 2:
            raise EvenCharacteristic("characteristic 2 is excluded (char != 2 is assumed throughout)")
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        if check and not irreducible_mod_p(modulus, p):
            raise Reducible(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.d = len(modulus) - 1
        self.modulus = modulus
        self.q = p**self.d
        self._powers = [p**i for i in range(self.d)]
        self._log = None
        self._exp = None
        self._zech = None
        self._nonsquare = None
        self._sqrt_table = None
        self._lex = None
        if self.d > 1 and (tables if tables is not None else self.q <= TABLE_LIMIT):
            self._build_tables()

    # -- identity --
    def __eq__(self, other):
        return isinstance(other, FqField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        if self.d == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.d}[mod {self.modulus}]"

    def __reduce__(self):
        return (FqField, (self.p, self.modulus), None)

    # -- encoding --
    def digits(self, n: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.d):
            n, r = divmod(n, p)
            out.append(r)
        return tuple(out)

    def undigits(self, cs) -> int:
        n = 0
        for c, pw in zip(cs, self._powers):
            n += (c % self.p) * pw
        return n

    def __call__(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            if value.field != self:
                raise FieldMismatch(f"{value!r} is not in {self}")
            return value
        if isinstance(value, int):
            return FqElem(self, value % self.p)
        cs = list(value)
        if len(cs) > self.d:
            raise ValueError(f"expected at most {self.d} coefficients")
        return FqElem(self, self.undigits(cs))

    @property
    def zero(self) -> "FqElem":
        return FqElem(self, 0)

    @property
    def one(self) -> "FqElem":
        return FqElem(self, 1)

    def gen(self) -> "FqElem":
        """The class of x (for d = 1 this is the root of the linear modulus)."""
        if self.d == 1:
            return FqElem(self, (-self.modulus[0]) % self.p)
        return FqElem(self, self.p)

    def elements(self):
        """All elements in lexicographic order of their coefficient tuples."""
        for cs in itertools.product(range(self.p), repeat=self.d):
            yield FqElem(self, self.undigits(cs))

    def lex_order(self) -> list[int]:
        """Encoded elements sorted by coefficient tuple."""
        if self._lex is None:
            self._lex = [self.undigits(cs) for cs in itertools.product(range(self.p), repeat=self.d)]
        return self._lex

    def sort_key(self, n: int) -> tuple[int, ...]:
        return self.digits(n) if self.d > 1 else (n,)

    # -- raw arithmetic on encoded ints --
    def add(self, x: int, y: int) -> int:
        if self.d == 1:
            return (x + y) % self.p
        if not x:
            return y
        if not y:
            return x
        if self._zech is not None:
            lx, ly = self._log[x], self._log[y]
            z = self._zech[(ly - lx) % (self.q - 1)]
            if z < 0:
                return 0
            return self._exp[(lx + z) % (self.q - 1)]
        p = self.p
        n, pw = 0, 1
        for _ in range(self.d):
            x, a = divmod(x, p)
            y, b = divmod(y, p)
            n += ((a + b) % p) * pw
            pw *= p
        return n

    def neg(self, x: int) -> int:
        if self.d == 1:
            return -x % self.p
        p = self.p
        n, pw = 0, 1
        for _ in range(self.d):
            x, a = divmod(x, p)
            n += (-a % p) * pw
            pw *= p
        return n

    def sub(self, x: int, y: int) -> int:
        if self.d == 1:
            return (x - y) % self.p
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.d == 1:
            return x * y % self.p
        if not x or not y:
            return 0
        if self._log is not None:
            return self._exp[(self._log[x] + self._log[y]) % (self.q - 1)]
        return self._mul_digits(x, y)

    def _mul_digits(self, x: int, y: int) -> int:
        p, d, m = self.p, self.d, self.modulus
        a, b = self.digits(x), self.digits(y)
        prod = [0] * (2 * d - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    prod[i + j] += u * v
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(d):
                    prod[i - d + j] -= c * m[j]
        return self.undigits(prod[:d])

    def inv(self, x: int) -> int:
        if not x:
            raise DivisionByZero("inverse of zero")
        if self.d == 1:
            return pow(x, -1, self.p)
        if self._log is not None:
            return self._exp[(-self._log[x]) % (self.q - 1)]
        return self.pow(x, self.q - 2)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            x, e = self.inv(x), -e
        if self.d == 1:
            return pow(x, e, self.p)
        if not x:
            return 1 if e == 0 else 0
        if self._log is not None:
            return self._exp[(self._log[x] * e) % (self.q - 1)]
        result = 1
        while e:
            if e & 1:
                result = self._mul_digits(result, x)
            x = self._mul_digits(x, x)
            e >>= 1
        return result

    def _build_tables(self):
        q = self.q
        order = q - 1
        factors = _prime_factors(order)
        g = None
        for cand in range(2, q):
            if all(self._pow_digits(cand, order // r) != 1 for r in factors):
                g = cand
                break
        exp = [0] * order
        log = [0] * q
        cur = 1
        for k in range(order):
            exp[k] = cur
            log[cur] = k
            cur = self._mul_digits(cur, g)
        log[0] = -1
        self._exp, self._log = exp, log
        zech = [0] * order
        for k in range(order):
            s = self._add_digits(1, exp[k])
            zech[k] = log[s] if s else -1
        self._zech = zech

    def _pow_digits(self, x, e):
        result = 1
        while e:
            if e & 1:
                result = self._mul_digits(result, x)
            x = self._mul_digits(x, x)
            e >>= 1
        return result

    def _add_digits(self, x, y):
        return self.undigits([a + b for a, b in zip(self.digits(x), self.digits(y))])

    # -- squares --
    def is_square_raw(self, x: int) -> bool:
        if not x:
            raise ZeroInput("0 is neither a square class nor a non-square class")
        if self._log is not None:
            return self._log[x] % 2 == 0
        return self.pow(x, (self.q - 1) // 2) == 1

    def nonsquare_raw(self) -> int:
        """Smallest non-square in the lexicographic order of coefficient tuples."""
        if self._nonsquare is None:
            for cs in itertools.product(range(self.p), repeat=self.d):
                n = self.undigits(cs)
                if n and not self.is_square_raw(n):
                    self._nonsquare = n
                    break
        return self._nonsquare

    def sqrt_raw(self, x: int) -> int:
        if not x:
            return 0
        if not self.is_square_raw(x):
            raise NotASquare(f"{FqElem(self, x)} is not a square in {self}")
        q = self.q
        if q % 4 == 3:
            y = self.pow(x, (q + 1) // 4)
        else:
            # Tonelli-Shanks on the cyclic group of order q-1
            s, t = 0, q - 1
            while t % 2 == 0:
                s, t = s + 1, t // 2
            z = self.pow(self.nonsquare_raw(), t)
            y = self.pow(x, (t + 1) // 2)
            b = self.pow(x, t)
            m = s
            while b != 1:
                i, bb = 0, b
                while bb != 1:
                    bb = self.mul(bb, bb)
                    i += 1
                c = z
                for _ in range(m - i - 1):
                    c = self.mul(c, c)
                y = self.mul(y, c)
                z = self.mul(c, c)
                b = self.mul(b, z)
                m = i
        assert self.mul(y, y) == x
        ny = self.neg(y)
        return min(y, ny, key=self.sort_key)

    def sqrt_table(self) -> dict[int, int]:
        """Map each square to its canonical root (small fields only)."""
        if self._sqrt_table is None:
            table = {}
            for n in range(self.q):
                sq = self.mul(n, n)
                if sq not in table or self.sort_key(n) < self.sort_key(table[sq]):
                    table[sq] = n
            self._sqrt_table = table
        return self._sqrt_table


class FqElem:
    __slots__ = ("field", "n")

    def __init__(self, field: FqField, n: int):
        self.field = field
        self.n = n

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.digits(self.n)

    def _other(self, other) -> int:
        if isinstance(other, FqElem):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.n
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        y = self._other(other)
        if y is NotImplemented:
            return y
        return FqElem(self.field, self.field.add(self.n, y))

    __radd__ = __add__

    def __sub__(self, other):
        y = self._other(other)
        if y is NotImplemented:
            return y
        return FqElem(self.field, self.field.sub(self.n, y))

    def __rsub__(self, other):
        y = self._other(other)
        if y is NotImplemented:
            return y
        return FqElem(self.field, self.field.sub(y, self.n))

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.n))

    def __mul__(self, other):
        y = self._other(other)
        if y is NotImplemented:
            return y
        return FqElem(self.field, self.field.mul(self.n, y))

    __rmul__ = __mul__

    def __truediv__(self, other):
        y = self._other(other)
        if y is NotImplemented:
            return y
        return FqElem(self.field, self.field.div(self.n, y))

    def __rtruediv__(self, other):
        y = self._other(other)
        if y is NotImplemented:
            return y
        return FqElem(self.field, self.field.div(y, self.n))

    def __pow__(self, e: int):
        return FqElem(self.field, self.field.pow(self.n, e))

    def inverse(self) -> "FqElem":
        return FqElem(self.field, self.field.inv(self.n))

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.field == other.field and self.n == other.n
        if isinstance(other, int):
            return self.n == other % self.field.p and (self.field.d == 1 or self.n < self.field.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.n))

    def __bool__(self):
        return self.n != 0

    def sort_key(self):
        return self.field.sort_key(self.n)

    def is_square(self) -> bool:
        return self.field.is_square_raw(self.n)

    def sqrt(self) -> "FqElem":
        return FqElem(self.field, self.field.sqrt_raw(self.n))

    def __repr__(self):
        return f"FqElem({format_elem(self)}, {self.field})"

    def __str__(self):
        return format_elem(self)


def format_elem(x: FqElem, var: str = "w") -> str:
    """Render an element as a polynomial in the field generator, highest degree first."""
    cs = x.coeffs
    terms = []
    for i in range(len(cs) - 1, -1, -1):
        c = cs[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) if terms else "0"


@lru_cache(maxsize=None)
def fq_make(p: int, d: int = 1) -> FqField:
    """The canonical F_{p^d}: modulus is the lexicographically smallest monic irreducible."""
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is excluded (char != 2 is assumed throughout)")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if d < 1:
        raise ValueError("degree must be >= 1")
    if d == 1:
        return FqField(p, (0, 1), check=False)
    for cs in itertools.product(range(p), repeat=d):
        f = list(cs) + [1]
        if cs[0] and irreducible_mod_p(f, p):
            return FqField(p, f, check=False)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def fq_arith(x: FqElem, y, op: str) -> FqElem:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "pow":
        return x**y
    raise ValueError(f"unknown op {op!r}")


def fq_is_square(x: FqElem) -> bool:
    return x.is_square()


def fq_sqrt(x: FqElem) -> FqElem:
    if not x:
        raise ZeroInput("square root of zero is not classified")
    return x.sqrt()


def canonical_nonsquare(field: FqField) -> FqElem:
    return FqElem(field, field.nonsquare_raw())


def quadratic_character(x: FqElem) -> int:
    return 1 if x.is_square() else -1
