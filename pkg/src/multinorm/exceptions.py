"""
This file centralizes all the "errors" specific to multinorm.

Author: Mounia Tonazzini
Date: October 2026
"""


class MultinormError(Exception):
    """Base class for all multinorm project exceptions."""
    pass

class ValidationError(MultinormError):
    """Raised when an input (family, place data, context, profile...) is invalid."""
    pass

class DimensionMismatchError(ValidationError):
    """Raised when a matrix is ragged or a vector does not match the ambient rank."""
    pass

class InfiniteQuotientError(ValidationError):
    """Raised when a presentation defines an infinite abelian group."""
    pass

class ZeroVectorError(ValidationError):
    """Raised when an exponent vector is zero modulo p^n (it generates no field)."""
    pass

class DuplicateFieldError(ValidationError):
    """Raised when two exponent vectors generate the same cyclic submodule."""
    pass

class CommonIntersectionNotTrivialError(ValidationError):
    """Raised when the fields of a family share a common subfield bigger than k."""
    pass

class InconsistentProfileError(ValidationError):
    """Raised when the flags of a field profile contradict each other."""
    pass

class InsufficientDataError(ValidationError):
    """Raised when the supplied data does not determine the requested index."""
    pass

class MissingNarrowDataError(ValidationError):
    """Raised when a narrow evaluator is called without the narrow inputs."""
    pass

class MissingDegreeZeroDataError(ValidationError):
    """Raised when a degree-zero evaluator is called without the degree-zero inputs."""
    pass

class InstanceParseError(MultinormError):
    """Raised when an instance file cannot be parsed.

    Carries the location of the problem when it is known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 key: str | None = None):
        self.line = line
        self.column = column
        self.key = key
        location = ""
        if line is not None:
            location = f" (line {line}, column {column})"
        elif key is not None:
            location = f" (key '{key}')"
        super().__init__(f"{message}{location}")

class ProviderContractViolation(MultinormError):
    """Raised when an invariant provider returns a value outside its contract."""
    pass

class NonIntegralClassNumberError(MultinormError):
    """Raised when an implied class number is not a positive integer (inconsistent inputs)."""
    pass

class CalculationError(MultinormError):
    """Raised when an internal mathematical invariant is broken."""
    pass

class RuleCatalogueError(MultinormError):
    """Raised if a rule is missing or incorrectly defined in the rule catalogue."""
    pass
