"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ModelRiskError(Exception):
    """Base class for all errors raised by :mod:`modelrisk`."""


class DomainError(ModelRiskError, ValueError):
    """A parameter lies outside the domain of the operation."""


class MomentError(ModelRiskError, ValueError):
    """Moments are missing, infinite, or do not match the required class."""


class IntegrabilityError(ModelRiskError, ArithmeticError):
    """A tail integral failed to converge numerically."""


class NonInvertibleEnvelope(ModelRiskError):
    """The envelope has a flat and extremal quantiles cannot be read off it."""


class AlphaOutOfRange(DomainError):
    """Level outside the open band (low_limit, high_limit) of an envelope."""


class NonPositiveReference(ModelRiskError, ValueError):
    """The reference risk figure is not strictly positive."""


class DegenerateRange(ModelRiskError, ValueError):
    """Best and worst case coincide (or are inverted)."""


class OutOfRange(ModelRiskError, ValueError):
    """The reference risk lies outside [best case, worst case]."""


class RadiusTooLarge(DomainError):
    """Perturbation radius too large for the closed forms to apply."""


class RootBracketError(ModelRiskError, ArithmeticError):
    """A monotone root could not be bracketed."""


class PreconditionError(ModelRiskError, ValueError):
    """A documented precondition of the operation does not hold."""


class InfeasibleConstraints(ModelRiskError):
    """No law on the search grid satisfies the moment constraints."""


class ValidationError(ModelRiskError, ValueError):
    """Input data failed validation."""


class ParseError(ModelRiskError, ValueError):
    """Input file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
