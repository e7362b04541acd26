"""Exception hierarchy."""


class FundopError(Exception):
    """Base class for all errors raised by :mod:`fundop`."""


class InputError(FundopError):
    """Malformed or mis-shaped input (bad file, wrong dimensions, ...)."""


class NonSquare(InputError):
    pass


class DimMismatch(InputError):
    pass


class NotHermitian(InputError):
    pass


class NotCommuting(InputError):
    pass


class NotPSD(FundopError):
    pass


class NotContraction(FundopError):
    pass


class NotPure(FundopError):
    pass


class NotUnitary(FundopError):
    pass


class ResolventSingular(FundopError):
    pass


class NoConvergence(FundopError):
    pass


class InconsistentEquation(FundopError):
    """A fundamental equation has no solution on the defect space."""


class NumericalRadiusExceeded(FundopError):
    pass


class NotAdmissible(FundopError):
    pass


class PreconditionFailed(FundopError):
    def __init__(self, check, message=None):
        self.check = check
        super().__init__(message or f"precondition failed: {check}")
