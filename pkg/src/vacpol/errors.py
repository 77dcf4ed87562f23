"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of a function."""


class RangeError(OverflowError):
    """The result cannot be represented as a finite double."""


class ContractError(RuntimeError):
    """A caller-supplied object does not provide what the operation needs."""


class RegimeWarning(UserWarning):
    """An approximation was requested outside the regime where it is valid,
    or an evaluation route fell back to another one."""
