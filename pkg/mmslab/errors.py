"""Exception hierarchy for mmslab

Classes:
    MMSLabError - base class for every error raised by the package
    ValidationError - malformed input (exit code 2)
        SpaceError, FieldError, ParameterError, ConfigError
    NumericalError - a computation could not be completed (exit code 3)
        ConvergenceError, NonFiniteError, PoincareViolation
    OutputError - reports could not be written (exit code 4)

Every exception carries the name of the operation that raised it,
so the command line runner can emit a single diagnostic line.
"""

from typing import Optional


class MMSLabError(Exception):
    """Base class for mmslab exceptions"""

    exit_code = 1

    def __init__(self, message: str, operation: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.operation = operation


class ValidationError(MMSLabError):
    """Input failed validation"""

    exit_code = 2


class SpaceError(ValidationError):
    """Invalid metric, weights or anisotropy matrix"""


class FieldError(ValidationError):
    """Field does not match its space or holds non-finite values"""


class ParameterError(ValidationError):
    """Functional parameter outside its admissible range"""


class ConfigError(ValidationError):
    """Experiment configuration does not validate"""


class NumericalError(MMSLabError):
    """Computation failed numerically"""

    exit_code = 3


class ConvergenceError(NumericalError):
    """Iteration cap reached without meeting the tolerance"""


class NonFiniteError(NumericalError):
    """A non-finite intermediate was produced"""


class PoincareViolation(NumericalError):
    """Constructive Poincaré bound failed"""


class OutputError(MMSLabError):
    """Configuration or report file could not be read or written"""

    exit_code = 4
