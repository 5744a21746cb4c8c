"""Exception hierarchy shared by every layer of the package."""


class AlgebraError(Exception):
    """Base class for all errors raised by tensor_gorenstein."""


# linear algebra
class FieldMismatch(AlgebraError):
    pass


class DimensionMismatch(AlgebraError):
    pass


class NotAComplex(AlgebraError):
    pass


# algebras
class InfiniteDimensional(AlgebraError):
    pass


class MalformedRelation(AlgebraError):
    pass


class NotAssociative(AlgebraError):
    pass


class BadUnit(AlgebraError):
    pass


class BadIdempotents(AlgebraError):
    pass


class RadicalRequired(AlgebraError):
    pass


class RadicalUnavailable(AlgebraError):
    pass


# modules
class AlgebraMismatch(AlgebraError):
    pass


class NotBasic(AlgebraError):
    pass


class NotAModule(AlgebraError):
    pass


class NotAHomomorphism(AlgebraError):
    pass


# tensor rings / gorenstein
class NotNilpotent(AlgebraError):
    pass


class NotGorensteinProjective(AlgebraError):
    pass


class NotInGmon(AlgebraError):
    pass


class SolveFailed(AlgebraError):
    """A linear system that the theory guarantees solvable had no solution."""


class Inconclusive(AlgebraError):
    """A bounded search ran out of budget before reaching a verdict."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


# scenario / cli
class ParseError(AlgebraError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(AlgebraError):
    pass


class FieldUnsupported(AlgebraError):
    pass
