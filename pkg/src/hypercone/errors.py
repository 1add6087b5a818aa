"""Exception hierarchy shared by every module."""

import numpy as np


class HyperconeError(Exception):
    """Base class for all errors raised by this package."""


class ArgumentError(HyperconeError, ValueError):
    """An argument is outside the operation's domain."""


class StrategyError(ArgumentError):
    """The requested construction strategy does not apply to this cone."""


class SingularPivotError(HyperconeError, np.linalg.LinAlgError):
    """A Schur complement pivot is numerically zero."""


class DefinitenessError(HyperconeError, np.linalg.LinAlgError):
    """A matrix expected to be positive definite is not."""


class NumericalError(HyperconeError, np.linalg.LinAlgError):
    """A dense linear algebra kernel failed to converge."""


class UnsupportedFormError(HyperconeError):
    """The representation form does not support the requested operation."""


class ParseError(HyperconeError, ValueError):
    """Malformed input file; ``lineno`` is 1-based (0 when unknown)."""

    def __init__(self, message, lineno=0):
        self.lineno = lineno
        if lineno:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class SolverError(HyperconeError):
    """The SDP solver did not reach a usable status."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
