class CameoError(Exception):
    """Base class for library errors."""


class DomainError(CameoError, ValueError):
    """An argument lies outside the domain of the operation."""


class BudgetExceeded(CameoError, RuntimeError):
    """A work or size budget was exhausted before a result was available.

    No partial result is attached.
    """
