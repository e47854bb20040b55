"""Exception hierarchy shared across the toolkit.

Data problems (bad files, shape mismatches, degenerate inputs) derive from
DataError; numerical failures inside a solver derive from NumericalError.
The CLI maps these to distinct exit codes.
"""


class SrckitError(Exception):
    """Base class for all toolkit errors."""


class DataError(SrckitError):
    """Invalid or degenerate input data."""


class NumericalError(SrckitError):
    """A numerical procedure broke down."""


class DimensionMismatch(DataError):
    pass


class ZeroColumn(DataError):
    def __init__(self, index: int):
        super().__init__(f"column {index} has (near-)zero norm")
        self.index = index


class OrthogonalInput(DataError):
    """Test observation is orthogonal to every training column."""


class NumericalBreakdown(NumericalError):
    """Homotopy breakpoint computation degenerated."""


class EmptyClassSet(DataError):
    pass


class EmptyInput(DataError):
    pass


class InsufficientData(DataError):
    pass


class NotSquare(DataError):
    pass


class DimensionTooLarge(DataError):
    pass


class DimensionTooSmall(DataError):
    pass


class EmptyTrainingSet(DataError):
    pass


class SingularCovariance(NumericalError):
    pass


class InfeasibleGeometry(DataError):
    pass


class ClassTooSmall(DataError):
    pass


class ParseError(DataError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class RaggedRow(ParseError):
    def __init__(self, line: int, expected: int, got: int):
        super().__init__(line, f"expected {expected} fields, got {got}")
        self.expected = expected
        self.got = got


class LabelCountMismatch(DataError):
    pass
