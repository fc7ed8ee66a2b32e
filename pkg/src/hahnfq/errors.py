"""Exception hierarchy.

Every error carries a module-qualified ``code`` (``"ffield.FieldTooSmall"``
and so on) which the command line front end reports verbatim.
"""

from __future__ import annotations


class HahnError(Exception):
    """Base class for all errors raised by this package."""

    module = "hahnfq"

    @property
    def code(self) -> str:
        return f"{self.module}.{type(self).__name__}"


# ffield

class MixedFields(HahnError, ValueError):
    module = "ffield"


class DivisionByZero(HahnError, ZeroDivisionError):
    module = "ffield"


class NotASubfield(HahnError, ValueError):
    module = "ffield"


class FieldTooSmall(HahnError):
    """A root lives outside the ambient field.

    ``required_degree`` is the degree over F_p of a field that contains it;
    re-run the computation with that ambient field.
    """

    module = "ffield"

    def __init__(self, required_degree: int, message: str = ""):
        self.required_degree = required_degree
        super().__init__(message or f"roots need a field of degree {required_degree} over F_p")


class UnsupportedField(HahnError, ValueError):
    module = "ffield"


# exponents

class IncompatibleDenominator(HahnError, ValueError):
    module = "exponents"


# lrr

class SingularSystem(HahnError, ValueError):
    module = "lrr"


# series

class DuplicateExponent(HahnError, ValueError):
    module = "series"


# twistrec

class NotInDomain(HahnError, ValueError):
    module = "twistrec"


class InconsistentDomain(HahnError, ValueError):
    module = "twistrec"


class SpecMismatch(HahnError):
    module = "twistrec"


class PeriodUnverified(HahnError):
    module = "twistrec"


# rootfind

class UnresolvedValuation(HahnError):
    module = "rootfind"


class BudgetExceeded(HahnError):
    module = "rootfind"


# cli

class ParseError(HahnError, ValueError):
    """Malformed job text; ``pos`` is the 0-based character offset."""

    module = "cli"

    def __init__(self, message: str, pos: int = 0):
        self.pos = pos
        super().__init__(f"{message} (at position {pos})")

    @property
    def code(self) -> str:
        return "cli.SyntaxError"
