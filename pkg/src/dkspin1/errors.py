"""Exception hierarchy shared by all modules.

The CLI maps these onto stable exit codes, so each class carries its code.
"""


class DKError(Exception):
    exit_code = 1


class InvalidInputError(DKError, ValueError):
    exit_code = 3


class ToleranceUnreachableError(InvalidInputError):
    """Requested finite-difference step cannot meet the cross-check tolerance."""


class IdentityFailure(DKError):
    """A matrix or operator identity failed beyond tolerance."""

    exit_code = 1


class InconsistentQuantumNumbersError(DKError, ValueError):
    exit_code = 2


class NumericRangeError(DKError, ArithmeticError):
    exit_code = 3


class DegenerateMomentumError(NumericRangeError):
    """a = b = 0: the radial reduction divides by a +- ib."""


class SingularDenominatorError(NumericRangeError):
    pass


class PoleError(NumericRangeError):
    pass


class SeriesRangeError(NumericRangeError):
    pass


class BranchUnavailableError(NumericRangeError):
    """J_{-n} for integer n duplicates J_n; no second solution in the J_{+-order} family."""


class OracleFailure(NumericRangeError):
    pass


class ExportError(DKError, OSError):
    exit_code = 4
