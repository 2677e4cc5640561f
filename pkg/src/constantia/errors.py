"""Exception hierarchy shared by all engines."""


class ConstantiaError(Exception):
    """Base class for every error raised by this package."""


class BudgetExceededError(ConstantiaError):
    """A summation/iteration loop hit max_terms before meeting tolerance."""


class InvalidPolicyError(ConstantiaError):
    """A tail policy's assumption was violated by the actual terms."""


class FunctionDomainError(ConstantiaError):
    """A special function was evaluated outside its supported domain."""

    def __init__(self, function_name, argument, reason):
        self.function_name = function_name
        self.argument = argument
        self.reason = reason
        super().__init__(f"{function_name}({argument}): {reason}")


class NonConvergenceError(ConstantiaError):
    """Quadrature refinement levels failed to settle."""


class NoSignChangeError(ConstantiaError):
    """A root bracket does not certify a sign change."""


class UnresolvedPredicateError(ConstantiaError):
    """A qualitative predicate could not classify within its budget."""


class OracleCapError(ConstantiaError):
    """An exact enumeration was requested beyond its configured cap."""


class UnknownEntryError(ConstantiaError):
    """Catalog lookup for an id that does not exist."""


class ReferenceOnlyError(ConstantiaError):
    """compute() was called on an entry that has no recipe."""
