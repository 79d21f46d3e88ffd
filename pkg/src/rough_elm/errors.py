"""Exception hierarchy shared by every module of the package."""


class RoughElmError(Exception):
    """Base class for all package errors."""


class EmptyAttrSet(RoughElmError, ValueError):
    pass


class IndexOutOfRange(RoughElmError, IndexError):
    pass


class AttrAlreadyInBase(RoughElmError, ValueError):
    pass


class DimensionMismatch(RoughElmError, ValueError):
    pass


class SingularSystem(RoughElmError, ArithmeticError):
    pass


class SchemaMismatch(RoughElmError, ValueError):
    pass


class EmptyDataset(RoughElmError, ValueError):
    pass


class NonFiniteValue(RoughElmError, ValueError):
    pass


class ParseError(RoughElmError, ValueError):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class EmptyFile(RoughElmError, ValueError):
    pass


class InvalidConcept(RoughElmError, ValueError):
    pass


class InvalidNoise(RoughElmError, ValueError):
    pass


class TooSmallForSplit(RoughElmError, ValueError):
    pass


class VersionError(RoughElmError):
    pass
