"""Exception hierarchy.

Errors fall in three families that the command line maps to exit codes:
parse/usage problems (1), domain validation failures (2) and search
budgets being exceeded (3).
"""


class PosetBundleError(Exception):
    """Base class for every error raised by this package."""


class ParseError(PosetBundleError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(PosetBundleError):
    """Input is well formed but violates a mathematical precondition."""


class BudgetExceeded(PosetBundleError):
    pass


# poset-core
class DuplicateElement(ValidationError):
    pass


class UnknownElement(ValidationError):
    pass


class CycleDetected(ValidationError):
    pass


class NotConnected(ValidationError):
    pass


class NotOpen(ValidationError):
    pass


# simplicial
class DegreeOutOfRange(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class EndpointMismatch(ValidationError):
    pass


class PatternMismatch(ValidationError):
    pass


class UnknownEdge(ValidationError):
    pass


# groups
class SpecMismatch(ValidationError):
    pass


class NotContained(ValidationError):
    pass


# bundles
class EmptyFibre(ValidationError):
    pass


class InvalidBundle(ValidationError):
    pass


class BadAnchor(ValidationError):
    pass


class Mismatch(ValidationError):
    pass


# cohomology
class PartialCochain(ValidationError):
    pass


class NotConnection(ValidationError):
    pass


class NotCocycle(ValidationError):
    pass


class WrongInducedCocycle(ValidationError):
    pass


# cech
class InvalidCech(ValidationError):
    pass


class NotACover(ValidationError):
    pass
