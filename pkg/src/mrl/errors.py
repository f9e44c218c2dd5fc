"""Exception types shared across the package."""


class MRLError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MRLError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapabilityError(MRLError):
    """The model or routine lacks the requested capability.

    Distinct from :class:`DomainError`: the arguments are valid, but the
    quantity is not available (e.g. analytic hazard derivatives for a
    model that has none).
    """


class StabilityError(MRLError, ArithmeticError):
    """A closed form would lose too much precision at these arguments."""


class SurvivalUnderflowError(MRLError, ArithmeticError):
    """The survival function underflowed to zero."""


class ConvergenceError(MRLError, ArithmeticError):
    """An iterative or adaptive routine failed to reach its tolerance.

    The best available estimate is kept on the exception.
    """

    def __init__(self, message, estimate=None, abs_err=None):
        super().__init__(message)
        self.estimate = estimate
        self.abs_err = abs_err


class SpecParseError(MRLError, ValueError):
    """A model-spec string could not be parsed or validated."""

    def __init__(self, reason, text="", position=None):
        self.reason = reason
        self.text = text
        self.position = position
        if position is None:
            msg = reason
        else:
            msg = f"{reason} (at position {position} in {text!r})"
        super().__init__(msg)
