"""Exception hierarchy.

Every error raised on purpose by the library derives from ``ConicResError`` so
callers (the CLI in particular) can separate input problems from bugs.
"""


class ConicResError(Exception):
    pass


class NotPrime(ConicResError, ValueError):
    pass


class EvenCharacteristic(ConicResError, ValueError):
    """Characteristic 2 is excluded everywhere."""


class FieldMismatch(ConicResError, ValueError):
    pass


class DivisionByZero(ConicResError, ZeroDivisionError):
    pass


class ZeroInput(ConicResError, ValueError):
    pass


class ZeroElement(ZeroInput):
    pass


class NotASquare(ConicResError, ValueError):
    pass


class ZeroPolynomial(ConicResError, ValueError):
    pass


class Reducible(ConicResError, ValueError):
    pass


class NotMonic(ConicResError, ValueError):
    pass


class NegativeValuation(ConicResError, ValueError):
    pass


class PrecisionExhausted(ConicResError, ArithmeticError):
    pass


class PlaceMismatch(ConicResError, ValueError):
    pass


class NotAUnit(ConicResError, ValueError):
    pass


class SquareInput(ConicResError, ValueError):
    pass


class SingularMatrix(ConicResError, ValueError):
    pass


class DegenerateForm(ConicResError, ValueError):
    pass


class CharacteristicTwo(EvenCharacteristic):
    pass


class SearchSpaceTooLarge(ConicResError, ValueError):
    pass


class DoubleLine(ConicResError, ValueError):
    pass


class HypothesisViolation(ConicResError, ValueError):
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class ParseError(ConicResError, ValueError):
    pass
