"""
Exception hierarchy for the biliaison workbench
"""
from typing import Any, Optional


class BiliaisonError(Exception):
    """Base class for every error raised by the library"""


class ParseError(BiliaisonError):
    """Text input that does not match the grammar"""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class RingMismatchError(BiliaisonError):
    """Operands live in different polynomial rings"""


class ImproperIdealError(BiliaisonError):
    """The ideal contains a unit"""


class NotSaturatedError(BiliaisonError):
    """A saturated ideal was required"""


class NotEquidimensionalError(BiliaisonError):
    """The scheme has components of different dimension or embedded points"""


class DegenerateDivisorError(BiliaisonError):
    """No nonzerodivisor of the ambient coordinate ring in the divisor ideal"""


class ImpureDivisorError(BiliaisonError):
    """The divisor ideal is not of pure codimension one in the ambient scheme"""

    def __init__(self, message: str, hull: Optional[Any] = None):
        super().__init__(message)
        self.hull = hull


class LinkError(BiliaisonError):
    """A linkage precondition or the double-colon check failed"""


class NotLinearlyEquivalentError(BiliaisonError):
    """No multiplier witnessing the requested linear equivalence was found"""


class SearchExhaustedError(BiliaisonError):
    """A bounded search ran out of degrees or retries"""


class WindowError(BiliaisonError):
    """Degree window is empty or too small"""


class NonStandardMatrixError(BiliaisonError):
    """The matrix does not define a standard determinantal scheme"""


class IndexClashError(BiliaisonError):
    """Row or column indices collide"""


class GaetaChainError(BiliaisonError):
    """A step of the chain failed; the partial chain is attached"""

    def __init__(self, message: str, partial: Optional[Any] = None):
        super().__init__(message)
        self.partial = partial
