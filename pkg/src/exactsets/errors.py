"""Exception types shared across the package."""


class ExactSetsError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(ExactSetsError):
    pass


class SingularMatrix(ExactSetsError):
    pass


class DependentInput(ExactSetsError):
    pass


class EmptyInput(ExactSetsError):
    pass


class DependentGenerators(ExactSetsError):
    pass


class NotSublattice(ExactSetsError):
    pass


class UnboundedP(ExactSetsError):
    pass


class NotPointed(ExactSetsError):
    pass


class NotSimplicial(ExactSetsError):
    pass


class BoundTooSmall(ExactSetsError):
    pass


class IntegerIndicesPresent(ExactSetsError):
    pass


class StrictRowsPresent(ExactSetsError):
    pass


class MissingBounds(ExactSetsError):
    pass


class UnboundedLowerLevel(ExactSetsError):
    pass


class NonRationalLiteral(ExactSetsError):
    pass


class UnknownKind(ExactSetsError):
    pass


class DanglingReference(ExactSetsError):
    pass


class NonNegativeWeightRequired(ExactSetsError):
    pass


class DocumentSyntaxError(ExactSetsError):
    """Parse failure; carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column
