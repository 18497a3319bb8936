"""Exception hierarchy shared by every casimir_media module."""

from typing import Optional


class CasimirError(Exception):
    """Base class for all errors raised on purpose by casimir_media."""


class DomainError(CasimirError, ValueError):
    """A physical input lies outside the domain of the requested operation."""


class DegeneracyError(DomainError):
    """The undamped resonant formulas are singular at equal transition frequencies."""


class PoleError(DomainError):
    """tan(omega/2T) is evaluated too close to one of its poles."""


class ConvergenceError(CasimirError, ArithmeticError):
    """A quadrature or a Matsubara sum did not reach its tolerance."""


class ConfigError(CasimirError):
    """A run configuration could not be parsed or failed validation.

    Args:
        message: human readable description.
        field: dotted key path of the offending entry, if known.
        line: 1-based line number in the config file, if known.
    """

    def __init__(
        self, message: str, field: Optional[str] = None, line: Optional[int] = None
    ):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
