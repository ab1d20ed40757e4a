"""Exception hierarchy shared by the test pipeline, the solver and the harness."""


class JelSymError(Exception):
    """Base class for every error raised by this package."""


class InputError(JelSymError, ValueError):
    """Malformed or out-of-range input (shape, finiteness, sizes)."""


class InsufficientDataError(InputError):
    """Too few observations to form two sub-samples of size >= 3."""


class DegenerateDataError(InputError):
    """Pseudo-values of a sub-sample have zero spread."""


class InfeasibleThetaError(InputError):
    """theta is not strictly inside the range of the pseudo-values."""


class NonOverlapError(JelSymError):
    """The two pseudo-value supports are disjoint; the likelihood ratio is infinite."""


class InfeasibilityError(JelSymError, ArithmeticError):
    """A proposed solution produces a non-positive empirical likelihood weight."""


class ConvergenceError(JelSymError, RuntimeError):
    """A root finder hit its iteration cap or lost its bracket."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class ConfigError(JelSymError, ValueError):
    """Invalid study or test configuration."""
