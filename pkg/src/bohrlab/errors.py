"""Exception hierarchy shared by all bohrlab modules."""


class BohrLabError(Exception):
    """Base class for every error raised by bohrlab."""


class InvalidInputError(BohrLabError, ValueError):
    """Malformed or non-finite input data."""


class DomainError(BohrLabError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ContractError(BohrLabError, ValueError):
    """A documented precondition of an operation does not hold."""


class BracketError(BohrLabError, ValueError):
    """Polynomial has no sign change across the requested bracket."""


class DegenerateFamilyError(BohrLabError, ValueError):
    """Bisection predicate already fails at the smallest radius."""
