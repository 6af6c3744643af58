"""Exception types shared across the toolkit."""


class InvalidArgument(ValueError):
    pass


class PreconditionViolation(ValueError):
    pass


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; indicates an arithmetic bug."""


class NumericPrecisionError(ArithmeticError):
    """A floating-point result could not be turned back into exact data."""


class CapExceeded(ValueError):
    """The requested prime is above a configured computation cap."""


class OutOfHypothesisWarning(UserWarning):
    pass
