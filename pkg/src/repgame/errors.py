"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: assumption violations map to 2, solver
failures to 3, verification failures to 4, and configuration problems to 5.
"""

from __future__ import annotations


class RepgameError(Exception):
    """Base class for all package errors."""


class DomainError(RepgameError, ValueError):
    """An operation was called with inputs outside its contract."""


class ConfigError(RepgameError):
    """A run configuration file or value is malformed."""


class AssumptionError(RepgameError):
    """Model parameters fail the regime-of-interest assumption check.

    Carries the structured clause-by-clause report when available.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class SolverError(RepgameError):
    """A root or fixed point could not be located or certified."""


class EmptySweepError(RepgameError):
    """Every grid point of a parameter sweep was invalid."""


class EstimationError(RepgameError):
    """An estimator is undefined on the given sample."""


class InconsistentInputsError(EstimationError):
    """Plug-in estimate fell outside [0, 1]: the data contradict the model.

    The offending value is kept on the exception for diagnostics.
    """

    def __init__(self, message: str, value: float):
        super().__init__(message)
        self.value = value
