"""Exception types raised across the package."""


class RidgeApproxError(Exception):
    """Base class for all errors raised by ridgeapprox."""


class InvalidArgument(RidgeApproxError, ValueError):
    pass


class UnsupportedDimension(InvalidArgument):
    pass


class SupportViolation(InvalidArgument):
    pass


class TooLarge(InvalidArgument):
    pass


class NumericalError(RidgeApproxError, ArithmeticError):
    """Failures of a numerical procedure (exit code 3 in the CLI)."""


class ConstructionFailed(NumericalError):
    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class AccuracyFailure(NumericalError):
    pass


class NumericalInconsistency(NumericalError):
    pass


class BasisFailure(NumericalError):
    pass
