"""Exception hierarchy shared by all maxsev modules."""


class MaxsevError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(MaxsevError, ValueError):
    """An object fails one of its structural invariants.

    ``report`` carries the diagnostic object (if any) that produced the failure.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InvalidPeriod(ValidationError):
    pass


class NonPositive(ValidationError):
    pass


class NonMonotoneTail(ValidationError):
    pass


class InvalidLaw(ValidationError):
    pass


class PeriodMismatch(ValidationError):
    pass


class InvalidModel(ValidationError):
    pass


class DomainError(MaxsevError, ValueError):
    """Argument outside the support half-line of a law."""


class ConvergenceError(MaxsevError, RuntimeError):
    """Root finding failed; for a validated law this indicates an internal bug."""


class NonMonotoneTimes(MaxsevError, ValueError):
    pass


class TooFewSamples(MaxsevError, ValueError):
    pass
