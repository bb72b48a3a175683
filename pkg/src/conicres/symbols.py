"""Hilbert symbols, Kummer characters and the residue (Gysin) map at a place.

Two independent symbol routes live here: :func:`hilbert_symbol_tame` evaluates
the closed tame formula, :func:`hilbert_symbol_conic` searches for a point on
the conic.  :func:`gysin_residue` gives the class in k*/k*^2, and
:func:`main_lemma_check` compares it with chi(a_bar)^nu(b) for a unit ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .conics import ConicPoint, conic_point_local
from .errors import NotAUnit, PlaceMismatch, ZeroElement
from .fields import FqElem
from .local import DEFAULT_PRECISION, LocalElem, SquareClass, square_class
from .places import Place


@dataclass(frozen=True)
class SymbolValue:
    value: int

    def __post_init__(self):
        if self.value not in (1, -1):
            raise ValueError("symbol values are +1 or -1")

    def __mul__(self, other: "SymbolValue") -> "SymbolValue":
        return SymbolValue(self.value * other.value)

    def __int__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, SymbolValue):
            return self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    @property
    def trivial(self) -> bool:
        return self.value == 1

    def __str__(self):
        return "+1" if self.value == 1 else "-1"


@dataclass(frozen=True)
class ResidueClass:
    place: Place
    value: SquareClass

    @property
    def trivial(self) -> bool:
        return self.value.trivial

    @property
    def representative(self) -> FqElem:
        return self.value.representative


def _pair(a: LocalElem, b: LocalElem):
    if not isinstance(a, LocalElem) or not isinstance(b, LocalElem):
        raise TypeError("symbols take LocalElem arguments")
    if a.place != b.place:
        raise PlaceMismatch(f"{a.place} vs {b.place}")
    if a.is_zero() or b.is_zero():
        raise ZeroElement("symbols are defined on nonzero elements")
    return a.place


def kummer_chi(x: FqElem) -> SquareClass:
    """Class of x in k*/k*^2: trivial iff k(sqrt x)/k splits."""
    return square_class(x)


def _tame_is_square(a: LocalElem, b: LocalElem) -> bool:
    place = _pair(a, b)
    M = place.model
    va, vb = a.nu(), b.nu()
    w = M.mul(M.pow(a.unit_residue_model(), vb), M.pow(b.unit_residue_model(), -va))
    if (va * vb) % 2:
        w = M.neg(w)
    return M.is_square_raw(w)


def hilbert_symbol_tame(a: LocalElem, b: LocalElem) -> SymbolValue:
    """chi_k((-1)^(va*vb) * a_bar^vb * b_bar^(-va)) from valuations and unit residues."""
    return SymbolValue(1 if _tame_is_square(a, b) else -1)


def hilbert_symbol_conic(a: LocalElem, b: LocalElem, precision: int = DEFAULT_PRECISION
                         ) -> tuple[SymbolValue, ConicPoint | None]:
    """+1 with a witness iff x^2 - a y^2 - b z^2 = 0 has a nonzero point over K."""
    _pair(a, b)
    point = conic_point_local(a, b, precision)
    return (SymbolValue(1), point) if point is not None else (SymbolValue(-1), None)


def gysin_residue(a: LocalElem, b: LocalElem) -> ResidueClass:
    place = _pair(a, b)
    return ResidueClass(place, SquareClass("residue", place.residue_field, _tame_is_square(a, b)))


@dataclass(frozen=True)
class MainLemmaReport:
    lhs: ResidueClass
    rhs: ResidueClass
    equal: bool


def main_lemma_check(a: LocalElem, b: LocalElem) -> MainLemmaReport:
    place = _pair(a, b)
    if a.nu() != 0:
        raise NotAUnit(f"a has valuation {a.nu()} at {place}")
    lhs = gysin_residue(a, b)
    rhs = ResidueClass(place, kummer_chi(a.unit_residue()) ** b.nu())
    return MainLemmaReport(lhs, rhs, lhs.value == rhs.value)
