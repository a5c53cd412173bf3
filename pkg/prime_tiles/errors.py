class PrimeTilesError(Exception):
    """Base class for every error raised by prime_tiles."""


class PreconditionError(PrimeTilesError, ValueError):
    """An operation was called with inputs outside its documented domain."""


class EnumerationBoundExceeded(PreconditionError):
    """A whole-group scan or search would visit more elements than allowed."""

    def __init__(self, operation, size, bound):
        self.operation = operation
        self.size = size
        self.bound = bound
        super().__init__(
            f"{operation}: group of {size} elements exceeds the configured bound of {bound}"
        )


class SearchBudgetExceeded(PreconditionError):
    """A backtracking search placed more translates than its node budget allows."""

    def __init__(self, operation, budget):
        self.operation = operation
        self.budget = budget
        super().__init__(f"{operation}: gave up after {budget} placements")


class InvalidModulus(PreconditionError):
    pass


class DimensionError(PreconditionError):
    pass


class NotInGeneralPosition(PreconditionError):
    pass


class ZeroFunctionError(PreconditionError):
    pass


class InputParseError(PrimeTilesError, ValueError):
    """Raised by the job parser. `field` is the dotted path of the bad field, if known."""

    def __init__(self, message, field=None):
        self.field = field
        prefix = f"{field}: " if field else ""
        super().__init__(f"{prefix}{message}")


class InternalInconsistency(PrimeTilesError, RuntimeError):
    """Two exact computations that must agree did not. Always a bug."""


class TheoremViolation(InternalInconsistency):
    """A verified tile of prime size produced no annihilated p-power class."""


class NoAnnihilatedClass(PrimeTilesError):
    """No class of p-power order lies in the zero set; `is_tile` records the diagnosis."""

    def __init__(self, message, is_tile=False):
        self.is_tile = is_tile
        super().__init__(message)


class NotConstructed(PrimeTilesError):
    """Both the direct construction and the bounded fallback search came up empty."""
