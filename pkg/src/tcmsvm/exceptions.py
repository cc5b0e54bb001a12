"""Exception hierarchy shared by every module of the package."""


class TCMError(Exception):
    """Base class for all errors raised by tcmsvm."""


class DataError(TCMError, ValueError):
    """Invalid input data (CLI exit code 2)."""


class NumericalError(TCMError, ArithmeticError):
    """A numerical procedure failed (CLI exit code 3)."""


class SingleClassInput(DataError):
    """The examples do not contain both a positive and a negative label."""


class DimensionMismatch(DataError):
    """Feature vectors of different lengths were combined."""


class DuplicateExamples(DataError):
    """Two identical labeled examples where distinct ones are required."""


class TooLarge(DataError):
    """An exhaustive enumeration was requested on too large an input."""


class TooManyNewPoints(TooLarge):
    """Joint transduction over more new points than can be enumerated."""


class InvalidDelta(DataError):
    """Critical-region size outside the open interval (0, 1)."""


class ParseError(DataError):
    """A data file could not be parsed."""


class SplitError(DataError):
    """A train/test split left the training part with a single class."""


class ConvergenceFailure(NumericalError):
    """The QP solver exhausted its iteration budget."""


class LemmaTwoViolation(NumericalError):
    """The new point is a support vector in neither picture.

    Mathematically impossible for two-class training data; its occurrence
    means the solver tolerances are too loose for the instance.
    """


class InternalError(NumericalError):
    """An internal consistency assertion failed."""
